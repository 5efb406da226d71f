//! Source-level extraction: scan Java files and lift endpoints, REST client
//! calls and data entities into the intermediate representation.

pub mod calls;
pub mod endpoints;
pub mod entities;
pub mod ir_io;
pub mod scanner;

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use crate::error::{Error, Result};
use crate::ingest::ServiceRoot;
use crate::model::{Diagnostic, SystemIR, SystemMeta};

pub use calls::extract_calls;
pub use endpoints::extract_endpoints;
pub use entities::extract_entities;
pub use ir_io::{load_ir, parse_ir, save_ir};
pub use scanner::scan_source;

/// Annotation and method-name vocabularies driving extraction. Defaults
/// cover Spring MVC, JAX-RS, JPA and Lombok; every list can be replaced
/// from configuration to follow project conventions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct FrontendConfig {
    /// Class annotations that mark a request-handling class.
    pub controller_markers: Vec<String>,
    /// Method annotations that declare an endpoint.
    pub endpoint_annotations: Vec<String>,
    /// Client method names whose invocations count as outbound REST calls.
    pub client_methods: Vec<String>,
    /// Class annotations that mark persistent entities.
    pub persistence_annotations: Vec<String>,
    /// Class annotations that mark value or transfer objects.
    pub data_annotations: Vec<String>,
    /// Class name suffixes that mark transfer objects without annotations.
    pub dto_suffixes: Vec<String>,
    /// Class annotations that exclude a class from entity extraction even
    /// when it carries data markers.
    pub entity_exclusions: Vec<String>,
    /// File extensions to scan.
    pub source_extensions: Vec<String>,
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl Default for FrontendConfig {
    fn default() -> Self {
        FrontendConfig {
            controller_markers: strings(&["RestController", "Controller", "Path"]),
            endpoint_annotations: strings(&[
                "GetMapping",
                "PostMapping",
                "PutMapping",
                "DeleteMapping",
                "PatchMapping",
                "RequestMapping",
                "GET",
                "POST",
                "PUT",
                "DELETE",
                "PATCH",
            ]),
            client_methods: strings(&[
                "getForObject",
                "getForEntity",
                "postForObject",
                "postForEntity",
                "put",
                "delete",
                "exchange",
            ]),
            persistence_annotations: strings(&["Entity", "Document", "Table"]),
            data_annotations: strings(&["Data", "Value", "Getter"]),
            dto_suffixes: strings(&["Dto", "DTO", "VO", "Request", "Response"]),
            entity_exclusions: strings(&["Service", "Repository"]),
            source_extensions: strings(&["java"]),
        }
    }
}

const EXCLUDED_DIRS: [&str; 3] = ["target", "build", "node_modules"];

fn keep_entry(entry: &walkdir::DirEntry) -> bool {
    if entry.depth() == 0 || !entry.file_type().is_dir() {
        return true;
    }
    let name = entry.file_name().to_string_lossy();
    !name.starts_with('.') && !EXCLUDED_DIRS.contains(&name.as_ref())
}

fn relative_display(path: &Path, root: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join("/")
}

#[derive(Default)]
struct ServiceFacts {
    endpoints: Vec<crate::model::EndpointDef>,
    calls: Vec<crate::model::RestCall>,
    entities: Vec<crate::model::EntityDef>,
    diagnostics: Vec<Diagnostic>,
}

/// Scan one service tree. Classes that expose endpoints never double as
/// entities, so a single pass decides each class's role.
fn scan_service(root: &ServiceRoot, analysis_root: &Path, config: &FrontendConfig) -> ServiceFacts {
    let mut facts = ServiceFacts::default();
    let service = root.id.name.as_str();
    let mut files: Vec<std::path::PathBuf> = WalkDir::new(&root.root_dir)
        .into_iter()
        .filter_entry(keep_entry)
        .filter_map(|e| e.ok())
        .filter(|e| {
            e.file_type().is_file()
                && e.path()
                    .extension()
                    .and_then(|x| x.to_str())
                    .is_some_and(|x| config.source_extensions.iter().any(|s| s == x))
        })
        .map(|e| e.into_path())
        .collect();
    files.sort();
    for path in files {
        let rel = relative_display(&path, analysis_root);
        let text = match std::fs::read(&path) {
            Ok(bytes) => String::from_utf8_lossy(&bytes).into_owned(),
            Err(e) => {
                facts.diagnostics.push(Diagnostic::warning(
                    "unreadable-file",
                    format!("cannot read {rel}: {e}"),
                    None,
                ));
                continue;
            }
        };
        let (classes, mut scan_diags) = scan_source(&text, &rel);
        facts.diagnostics.append(&mut scan_diags);
        for class in &classes {
            let slice = std::slice::from_ref(class);
            let (mut eps, mut ep_diags) = extract_endpoints(slice, service, config);
            facts.diagnostics.append(&mut ep_diags);
            let (mut outbound, mut call_diags) = extract_calls(slice, service, config);
            facts.calls.append(&mut outbound);
            facts.diagnostics.append(&mut call_diags);
            if eps.is_empty() {
                facts.entities.append(&mut extract_entities(slice, service, config));
            } else {
                facts.endpoints.append(&mut eps);
            }
        }
    }
    facts
}

/// Build the intermediate representation for a set of discovered services.
/// Extraction runs per service in parallel; results are normalized so the
/// output does not depend on scheduling.
pub fn build_ir(
    analysis_root: &Path,
    roots: &[ServiceRoot],
    config: &FrontendConfig,
    meta: SystemMeta,
) -> Result<(SystemIR, Vec<Diagnostic>)> {
    if roots.is_empty() {
        return Err(Error::EmptySystem);
    }
    let results: Vec<ServiceFacts> = roots
        .par_iter()
        .map(|root| scan_service(root, analysis_root, config))
        .collect();

    let mut ir = SystemIR::new(meta);
    let mut diagnostics = Vec::new();
    ir.services = roots.iter().map(|r| r.id.name.clone()).collect();
    let mut seen_entities: BTreeMap<(String, String), crate::model::SourceLoc> = BTreeMap::new();
    for mut facts in results {
        ir.endpoints.append(&mut facts.endpoints);
        ir.calls.append(&mut facts.calls);
        for entity in facts.entities {
            let key = (entity.service.clone(), entity.name.clone());
            match seen_entities.get(&key) {
                Some(first) => diagnostics.push(Diagnostic::warning(
                    "duplicate-entity-name",
                    format!(
                        "entity {} in service {} already defined at {}",
                        key.1, key.0, first
                    ),
                    Some(entity.source_loc.clone()),
                )),
                None => {
                    seen_entities.insert(key, entity.source_loc.clone());
                    ir.entities.push(entity);
                }
            }
        }
        diagnostics.append(&mut facts.diagnostics);
    }
    ir.normalize();
    ir.validate()?;
    Ok((ir, diagnostics))
}
