use std::collections::BTreeMap;

use crate::error::Result;
use crate::model::{EntityDef, EntityMatch, SystemIR};

use super::similarity::{name_similarity, SimilarityConfig, SynonymDict};

/// One set of entities across services judged to denote the same concept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceClass {
    /// The lexicographically smallest (service, entity name) member.
    pub representative: (String, String),
    pub members: Vec<(String, String)>,
}

/// The partition of all matched entities into equivalence classes: the
/// transitive closure of the pairwise matches. Deduplicated, this is the
/// system's context map.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EntityEquivalence {
    pub classes: Vec<EquivalenceClass>,
}

impl EntityEquivalence {
    /// Services touched by each class, deduplicated per class.
    pub fn services_per_class(&self) -> Vec<Vec<&str>> {
        self.classes
            .iter()
            .map(|class| {
                let mut services: Vec<&str> =
                    class.members.iter().map(|(s, _)| s.as_str()).collect();
                services.dedup();
                services
            })
            .collect()
    }
}

fn erase_generics(type_name: &str) -> &str {
    match type_name.find('<') {
        Some(idx) => type_name[..idx].trim_end(),
        None => type_name.trim(),
    }
}

fn fields_similar(
    a: &EntityDef,
    b: &EntityDef,
    dict: &SynonymDict,
    threshold: f64,
) -> u32 {
    let mut count = 0u32;
    for fa in &a.fields {
        for fb in &b.fields {
            if erase_generics(&fa.type_name) != erase_generics(&fb.type_name) {
                continue;
            }
            match name_similarity(&fa.name, &fb.name, dict) {
                Ok(score) if score >= threshold => count += 1,
                _ => {}
            }
        }
    }
    count
}

/// Compare every cross-service entity pair by name, then by field overlap.
/// Matched pairs are closed transitively into [`EntityEquivalence`] classes.
pub fn match_entities(
    ir: &SystemIR,
    cfg: &SimilarityConfig,
) -> Result<(Vec<EntityMatch>, EntityEquivalence)> {
    cfg.check()?;
    let dict = match &cfg.synonym_dict_path {
        Some(path) => SynonymDict::load(path)?,
        None => SynonymDict::default(),
    };
    match_entities_with_dict(ir, cfg, &dict)
}

pub fn match_entities_with_dict(
    ir: &SystemIR,
    cfg: &SimilarityConfig,
    dict: &SynonymDict,
) -> Result<(Vec<EntityMatch>, EntityEquivalence)> {
    let mut matches = Vec::new();
    for (i, a) in ir.entities.iter().enumerate() {
        for b in &ir.entities[i + 1..] {
            if a.service == b.service {
                continue;
            }
            let name_score = match name_similarity(&a.name, &b.name, dict) {
                Ok(score) => score,
                Err(_) => continue,
            };
            if name_score < cfg.threshold {
                continue;
            }
            let matched_field_count = fields_similar(a, b, dict, cfg.threshold);
            // Entities without fields have nothing to overlap; their name
            // agreement stands alone.
            let fieldless = a.fields.is_empty() || b.fields.is_empty();
            if !fieldless && matched_field_count < cfg.min_field_matches {
                continue;
            }
            let (first, second) = order_pair(a, b);
            matches.push(EntityMatch {
                a: first.clone(),
                b: second.clone(),
                name_score,
                matched_field_count,
            });
        }
    }
    matches.sort_by(|x, y| {
        (&x.a.service, &x.a.name, &x.b.service, &x.b.name).cmp(&(
            &y.a.service,
            &y.a.name,
            &y.b.service,
            &y.b.name,
        ))
    });
    let equivalence = close_transitively(&matches);
    Ok((matches, equivalence))
}

fn order_pair<'a>(a: &'a EntityDef, b: &'a EntityDef) -> (&'a EntityDef, &'a EntityDef) {
    let ka = (&a.service, &a.name);
    let kb = (&b.service, &b.name);
    if ka <= kb {
        (a, b)
    } else {
        (b, a)
    }
}

/// Union-find closure over the (service, name) keys of matched entities.
fn close_transitively(matches: &[EntityMatch]) -> EntityEquivalence {
    let mut index: BTreeMap<(String, String), usize> = BTreeMap::new();
    let key_of = |e: &EntityDef, index: &mut BTreeMap<(String, String), usize>| {
        let key = (e.service.clone(), e.name.clone());
        let next = index.len();
        *index.entry(key).or_insert(next)
    };
    let mut parent: Vec<usize> = Vec::new();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for m in matches {
        let a = key_of(&m.a, &mut index);
        let b = key_of(&m.b, &mut index);
        while parent.len() < index.len() {
            parent.push(parent.len());
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }

    let mut groups: BTreeMap<usize, Vec<(String, String)>> = BTreeMap::new();
    for (key, &idx) in &index {
        let root = find(&mut parent, idx);
        groups.entry(root).or_default().push(key.clone());
    }
    let mut classes: Vec<EquivalenceClass> = groups
        .into_values()
        .map(|mut members| {
            members.sort();
            EquivalenceClass { representative: members[0].clone(), members }
        })
        .collect();
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    EntityEquivalence { classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EntityField, EntityKind, SourceLoc, SystemMeta};

    fn entity(service: &str, name: &str, fields: &[(&str, &str)]) -> EntityDef {
        EntityDef {
            service: service.into(),
            name: name.into(),
            fields: fields
                .iter()
                .map(|(n, t)| EntityField { name: (*n).into(), type_name: (*t).into() })
                .collect(),
            kind: EntityKind::Dto,
            annotations: vec!["Data".into()],
            source_loc: SourceLoc { file: format!("{service}/{name}.java"), line: 1 },
        }
    }

    fn system(entities: Vec<EntityDef>) -> SystemIR {
        let mut ir = SystemIR::new(SystemMeta::unversioned("."));
        let mut services: Vec<String> = entities.iter().map(|e| e.service.clone()).collect();
        services.sort();
        services.dedup();
        ir.services = services;
        ir.entities = entities;
        ir.normalize();
        ir
    }

    #[test]
    fn same_name_one_shared_field_matches() {
        let ir = system(vec![
            entity("svc-a", "Order", &[("id", "UUID"), ("trainNumber", "String")]),
            entity("svc-b", "Order", &[("id", "UUID"), ("price", "Double")]),
        ]);
        let (matches, eq) = match_entities(&ir, &SimilarityConfig::default()).unwrap();
        assert_eq!(matches.len(), 1);
        assert_eq!(matches[0].matched_field_count, 1);
        assert_eq!(matches[0].name_score, 1.0);
        assert_eq!(eq.classes.len(), 1);
        assert_eq!(eq.classes[0].members.len(), 2);
    }

    #[test]
    fn distant_names_do_not_match() {
        let ir = system(vec![
            entity("svc-a", "Order", &[("id", "UUID")]),
            entity("svc-b", "OrderAlterInfo", &[("id", "UUID")]),
        ]);
        let (matches, _) = match_entities(&ir, &SimilarityConfig::default()).unwrap();
        assert!(matches.is_empty());
    }

    #[test]
    fn name_match_without_field_overlap_is_rejected() {
        let ir = system(vec![
            entity("svc-a", "Ticket", &[("id", "UUID")]),
            entity("svc-b", "Ticket", &[("seat", "Integer")]),
        ]);
        let (matches, _) = match_entities(&ir, &SimilarityConfig::default()).unwrap();
        assert!(matches.is_empty());

        let mut permissive = SimilarityConfig::default();
        permissive.min_field_matches = 0;
        let (matches, _) = match_entities(&ir, &permissive).unwrap();
        assert_eq!(matches.len(), 1);
        assert_eq!(matches[0].matched_field_count, 0);
    }

    #[test]
    fn fieldless_entities_match_on_name_alone() {
        let ir = system(vec![
            entity("svc-a", "Ping", &[]),
            entity("svc-b", "Ping", &[("at", "Instant")]),
        ]);
        let (matches, _) = match_entities(&ir, &SimilarityConfig::default()).unwrap();
        assert_eq!(matches.len(), 1);
        assert_eq!(matches[0].matched_field_count, 0);
    }

    #[test]
    fn generics_are_erased_for_field_types() {
        let ir = system(vec![
            entity("svc-a", "Cart", &[("items", "List<Item>")]),
            entity("svc-b", "Cart", &[("items", "List<CartItem>")]),
        ]);
        let (matches, _) = match_entities(&ir, &SimilarityConfig::default()).unwrap();
        assert_eq!(matches.len(), 1);
        assert_eq!(matches[0].matched_field_count, 1);
    }

    #[test]
    fn same_service_pairs_are_skipped() {
        let ir = system(vec![
            entity("svc-a", "Order", &[("id", "UUID")]),
            entity("svc-a", "OrderDto", &[("id", "UUID")]),
        ]);
        let (matches, _) = match_entities(&ir, &SimilarityConfig::default()).unwrap();
        assert!(matches.is_empty());
    }

    #[test]
    fn closure_merges_chained_matches() {
        let ir = system(vec![
            entity("svc-a", "ItemDto", &[("id", "String")]),
            entity("svc-b", "ItemDto", &[("id", "String")]),
            entity("svc-c", "ItemDto", &[("id", "String")]),
        ]);
        let (matches, eq) = match_entities(&ir, &SimilarityConfig::default()).unwrap();
        assert_eq!(matches.len(), 3);
        assert_eq!(eq.classes.len(), 1);
        assert_eq!(eq.classes[0].members.len(), 3);
        assert_eq!(eq.classes[0].representative, ("svc-a".into(), "ItemDto".into()));
    }

    #[test]
    fn output_is_input_order_independent() {
        let forward = vec![
            entity("svc-a", "Order", &[("id", "UUID")]),
            entity("svc-b", "Order", &[("id", "UUID")]),
            entity("svc-c", "User", &[("name", "String")]),
            entity("svc-a", "User", &[("name", "String")]),
        ];
        let mut reversed = forward.clone();
        reversed.reverse();
        let cfg = SimilarityConfig::default();
        let (m1, e1) = match_entities(&system(forward), &cfg).unwrap();
        let (m2, e2) = match_entities(&system(reversed), &cfg).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(e1, e2);
    }
}
