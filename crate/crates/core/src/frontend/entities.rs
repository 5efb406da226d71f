use crate::model::{EntityDef, EntityKind};

use super::scanner::ClassDecl;
use super::FrontendConfig;

/// Decide whether a class models data and with which role. Persistence
/// annotations win over value-object markers; a recognized name suffix makes
/// a DTO even without annotations.
fn classify(class: &ClassDecl, config: &FrontendConfig) -> Option<EntityKind> {
    let has = |names: &[String]| {
        class.annotations.iter().any(|a| names.iter().any(|n| n == &a.name))
    };
    if has(&config.persistence_annotations) {
        return Some(EntityKind::Persistent);
    }
    if has(&config.data_annotations)
        || config.dto_suffixes.iter().any(|s| class.name.ends_with(s.as_str()))
    {
        return Some(EntityKind::Dto);
    }
    None
}

/// Extract data entities from scanned classes. Classes marked as controllers
/// or other framework roles never count, even when they also carry data
/// annotations.
pub fn extract_entities(
    classes: &[ClassDecl],
    service: &str,
    config: &FrontendConfig,
) -> Vec<EntityDef> {
    let mut entities = Vec::new();
    for class in classes {
        let excluded = class.annotations.iter().any(|a| {
            config.controller_markers.iter().any(|m| m == &a.name)
                || config.entity_exclusions.iter().any(|m| m == &a.name)
        });
        if excluded {
            continue;
        }
        let Some(kind) = classify(class, config) else {
            continue;
        };
        entities.push(EntityDef {
            service: service.to_string(),
            name: class.name.clone(),
            fields: class.fields.clone(),
            kind,
            annotations: class.annotations.iter().map(|a| a.name.clone()).collect(),
            source_loc: class.source_loc.clone(),
        });
    }
    entities
}
