//! Deterministic system generator with planted ground truth. Every call is
//! constructed from a chosen endpoint, so the correct resolution is known by
//! construction and tests can compare resolver output against it.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matching::{name_similarity, SynonymDict};
use crate::model::path::{PathTemplate, Segment};
use crate::model::{
    EndpointDef, EntityDef, EntityField, EntityKind, HttpMethod, ParamDef, ParamKind, RestCall,
    SourceLoc, SystemIR, SystemMeta, UrlPart,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemSizes {
    pub services: usize,
    pub endpoints: usize,
    pub calls: usize,
    pub entities: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlantedKind {
    /// Resolves to exactly one endpoint.
    Clean,
    /// Ties between two twin endpoints; the lexicographic winner is planted.
    Ambiguous,
    /// Resolvable URL that matches no endpoint (or only the caller's own).
    Unmatched,
    /// Dynamic URL; the resolver must skip it.
    Unresolvable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedTarget {
    pub service: String,
    /// Rendered path template of the expected endpoint.
    pub path: String,
    pub method: HttpMethod,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedCall {
    /// Unique location identifying the call across normalization reorder.
    pub source_loc: SourceLoc,
    pub kind: PlantedKind,
    pub expected: Option<PlantedTarget>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EndpointStats {
    pub call_count: u32,
    pub callers: BTreeSet<String>,
}

/// Expected analysis results for a generated system.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlantedTruth {
    pub calls: Vec<PlantedCall>,
    /// (caller, callee) -> matched call count, ambiguous ties included.
    pub edm_cells: BTreeMap<(String, String), u32>,
    /// Canonically ordered (a, b) -> shared entity class count.
    pub ddm_cells: BTreeMap<(String, String), u32>,
    /// (service, rendered path, method) -> inbound call statistics.
    pub endpoint_call_stats: BTreeMap<(String, String, String), EndpointStats>,
    pub unmatched_count: u32,
    pub ambiguous_count: u32,
}

/// Pairwise-dissimilar base words for entity names; a runtime filter against
/// the similarity metric keeps cross-group scores safely under threshold.
const ENTITY_WORDS: [&str; 48] = [
    "Aardvark",
    "Blizzard",
    "Cathedral",
    "Driftwood",
    "Elephant",
    "Fortress",
    "Glacier",
    "Hurricane",
    "Iceberg",
    "Jackrabbit",
    "Kaleidoscope",
    "Labyrinth",
    "Mahogany",
    "Nightfall",
    "Obsidian",
    "Parachute",
    "Quicksand",
    "Rhinoceros",
    "Sandstorm",
    "Telescope",
    "Umbrella",
    "Volcano",
    "Waterfall",
    "Xylophone",
    "Yardstick",
    "Zeppelin",
    "Asteroid",
    "Bulldozer",
    "Carousel",
    "Dandelion",
    "Escalator",
    "Flamingo",
    "Gondola",
    "Harmonica",
    "Ignition",
    "Jubilee",
    "Kerosene",
    "Lighthouse",
    "Metronome",
    "Nutcracker",
    "Overture",
    "Pendulum",
    "Quarry",
    "Riverbed",
    "Skylight",
    "Tornado",
    "Unicycle",
    "Vineyard",
];

const VAR_TAGS: [&str; 5] = ["Integer", "String", "UUID", "boolean", "long"];

fn sample_value(tag: &str, n: u32) -> String {
    match tag {
        "Integer" | "long" => format!("{}", 100 + n),
        "UUID" => format!("123e4567-e89b-42d3-a456-4266141{:05}", n % 100_000),
        "boolean" => "true".to_string(),
        _ => format!("val{n}"),
    }
}

struct Gen {
    rng: ChaCha8Rng,
    token: u32,
}

impl Gen {
    /// Globally unique literal segment; uniqueness is what guarantees every
    /// planted call can only reach its own endpoint family.
    fn fresh_token(&mut self, prefix: &str) -> String {
        self.token += 1;
        format!("{prefix}{:04}", self.token)
    }

    fn pick(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }
}

struct GenEndpoint {
    def: EndpointDef,
    owner: usize,
}

fn make_template(g: &mut Gen, head: &str, wildcard: bool) -> PathTemplate {
    let mut segments = vec![Segment::Literal(head.to_string())];
    let tail = 1 + g.pick(3);
    for _ in 0..tail {
        if g.chance(0.4) {
            let tag = VAR_TAGS[g.pick(VAR_TAGS.len())];
            segments.push(Segment::Variable(tag.to_string()));
        } else {
            segments.push(Segment::Literal(g.fresh_token("seg")));
        }
    }
    PathTemplate::new(segments, wildcard).expect("generated template is non-empty")
}

fn endpoint_from_template(
    template: &PathTemplate,
    method: HttpMethod,
    owner: usize,
    services: &[String],
    index: usize,
) -> EndpointDef {
    let params = template
        .segments()
        .iter()
        .filter_map(|s| match s {
            Segment::Variable(tag) => Some(tag.clone()),
            Segment::Literal(_) => None,
        })
        .enumerate()
        .map(|(i, tag)| ParamDef {
            name: format!("p{i}"),
            declared_type: tag,
            kind: ParamKind::Path,
        })
        .collect();
    EndpointDef {
        service: services[owner].clone(),
        path: template.clone(),
        method,
        params,
        return_type: format!("Payload{index}"),
        source_loc: SourceLoc {
            file: format!("gen/{}/Api{index}.java", services[owner]),
            line: (index + 1) as u32,
        },
    }
}

fn random_method(g: &mut Gen) -> HttpMethod {
    match g.pick(4) {
        0 => HttpMethod::Get,
        1 => HttpMethod::Post,
        2 => HttpMethod::Put,
        _ => HttpMethod::Delete,
    }
}

/// Render a concrete URL for an endpoint: literals verbatim, variables as
/// either typed holes or pattern-conforming literal values, plus extra
/// segments behind a trailing wildcard.
fn instantiate_url(g: &mut Gen, def: &EndpointDef, host: Option<&str>) -> Vec<UrlPart> {
    let mut parts: Vec<UrlPart> = Vec::new();
    let mut text = match host {
        Some(host) => format!("http://{host}"),
        None => String::new(),
    };
    for segment in def.path.segments() {
        text.push('/');
        match segment {
            Segment::Literal(lit) => text.push_str(lit),
            Segment::Variable(tag) => {
                if g.chance(0.6) {
                    if !text.is_empty() {
                        parts.push(UrlPart::lit(&text));
                        text.clear();
                    }
                    parts.push(UrlPart::hole(tag));
                } else {
                    let n = g.rng.random_range(0..10_000);
                    text.push_str(&sample_value(tag, n));
                }
            }
        }
    }
    if def.path.has_trailing_wildcard() {
        for _ in 0..=g.pick(2) {
            text.push('/');
            text.push_str(&g.fresh_token("ext"));
        }
    }
    if !text.is_empty() {
        parts.push(UrlPart::lit(&text));
    }
    parts
}

fn check_sizes(sizes: &SystemSizes) -> Result<()> {
    if sizes.services == 0 || sizes.endpoints == 0 || sizes.calls == 0 || sizes.entities == 0 {
        return Err(Error::InvalidArgument(format!(
            "all sizes must be positive, got {}/{}/{}/{} services/endpoints/calls/entities",
            sizes.services, sizes.endpoints, sizes.calls, sizes.entities
        )));
    }
    Ok(())
}

/// Generate a deterministic IR-level system together with its ground truth.
/// Identical seed and sizes always produce identical output.
pub fn generate_ir_system(seed: u64, sizes: SystemSizes) -> Result<(SystemIR, PlantedTruth)> {
    check_sizes(&sizes)?;
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), token: 0 };
    let services: Vec<String> =
        (1..=sizes.services).map(|i| format!("svc-{i:03}")).collect();
    let mut truth = PlantedTruth::default();

    // Endpoint budget: twins feed ambiguity, decoys are near-misses that
    // must never catch a call, the rest are plain targets.
    let twin_pairs = if sizes.services >= 3 && sizes.endpoints >= 4 {
        (sizes.endpoints / 8).max(1)
    } else {
        0
    };
    let decoy_budget = sizes.endpoints.saturating_sub(2 * twin_pairs + 1).min(sizes.endpoints / 6);
    let plain_budget = sizes.endpoints - 2 * twin_pairs - decoy_budget;

    let mut endpoints: Vec<GenEndpoint> = Vec::new();
    let mut plain: Vec<usize> = Vec::new();
    let mut twins: Vec<(usize, usize)> = Vec::new();

    for _ in 0..plain_budget {
        let head = g.fresh_token("op");
        let wildcard = g.chance(0.1);
        let template = make_template(&mut g, &head, wildcard);
        let owner = g.pick(services.len());
        let index = endpoints.len();
        let def = endpoint_from_template(&template, random_method(&mut g), owner, &services, index);
        endpoints.push(GenEndpoint { def, owner });
        plain.push(index);
    }
    for _ in 0..twin_pairs {
        let head = g.fresh_token("op");
        let template = make_template(&mut g, &head, false);
        let method = random_method(&mut g);
        let owner_a = g.pick(services.len());
        let owner_b = (owner_a + 1 + g.pick(services.len() - 1)) % services.len();
        let ia = endpoints.len();
        let def_a = endpoint_from_template(&template, method.clone(), owner_a, &services, ia);
        endpoints.push(GenEndpoint { def: def_a, owner: owner_a });
        let def_b = endpoint_from_template(&template, method.clone(), owner_b, &services, ia + 1);
        endpoints.push(GenEndpoint { def: def_b, owner: owner_b });
        twins.push((ia, ia + 1));
    }
    for _ in 0..decoy_budget {
        // A decoy shadows a plain endpoint but differs by method or by one
        // literal segment, so signature matching always rejects it.
        let base = &endpoints[plain[g.pick(plain.len())]];
        let base_template = base.def.path.clone();
        let base_method = base.def.method.clone();
        let owner = g.pick(services.len());
        let index = endpoints.len();
        let flip_method = g.chance(0.5);
        let (template, method) = if flip_method {
            let mut m = random_method(&mut g);
            while m == base_method {
                m = random_method(&mut g);
            }
            (base_template, m)
        } else {
            let mut segments = base_template.segments().to_vec();
            let slots: Vec<usize> = (1..segments.len())
                .filter(|&i| segments[i].is_literal())
                .collect();
            if let Some(&slot) = slots.get(g.pick(slots.len().max(1)).min(slots.len().saturating_sub(1))) {
                segments[slot] = Segment::Literal(g.fresh_token("seg"));
            } else {
                segments.push(Segment::Literal(g.fresh_token("seg")));
            }
            (
                PathTemplate::new(segments, base_template.has_trailing_wildcard())
                    .expect("decoy template is non-empty"),
                base_method,
            )
        };
        let def = endpoint_from_template(&template, method, owner, &services, index);
        endpoints.push(GenEndpoint { def, owner });
    }

    // Call budget. Without twins nothing can be ambiguous; with a single
    // service nothing can cleanly match either.
    let mut ambiguous_budget = if twins.is_empty() { 0 } else { sizes.calls / 8 };
    let unresolvable_budget = sizes.calls / 16;
    let mut unmatched_budget = sizes.calls / 8;
    let mut clean_budget =
        sizes.calls - ambiguous_budget - unresolvable_budget - unmatched_budget;
    if services.len() == 1 || plain.is_empty() {
        unmatched_budget += clean_budget + ambiguous_budget;
        clean_budget = 0;
        ambiguous_budget = 0;
    }

    let mut calls: Vec<RestCall> = Vec::new();
    let record = |truth: &mut PlantedTruth, caller: &str, target: &EndpointDef| {
        *truth
            .edm_cells
            .entry((caller.to_string(), target.service.clone()))
            .or_insert(0) += 1;
        let stats = truth
            .endpoint_call_stats
            .entry((
                target.service.clone(),
                target.path.render(),
                target.method.as_str().to_string(),
            ))
            .or_default();
        stats.call_count += 1;
        stats.callers.insert(caller.to_string());
    };

    for n in 0..sizes.calls {
        let kind = if n < clean_budget {
            PlantedKind::Clean
        } else if n < clean_budget + ambiguous_budget {
            PlantedKind::Ambiguous
        } else if n < clean_budget + ambiguous_budget + unmatched_budget {
            PlantedKind::Unmatched
        } else {
            PlantedKind::Unresolvable
        };
        let (caller, url, method, expected, return_type) = match kind {
            PlantedKind::Clean => {
                let target = &endpoints[plain[g.pick(plain.len())]];
                let caller = (target.owner + 1 + g.pick(services.len() - 1)) % services.len();
                let host = match g.pick(3) {
                    // Hostname restriction, service-name path prefix, or
                    // bare path; the unique head keeps all three exact.
                    0 => Some(services[target.owner].clone()),
                    1 => None,
                    _ => None,
                };
                let mut url = instantiate_url(&mut g, &target.def, host.as_deref());
                if host.is_none() && g.chance(0.5) {
                    // Service-name prefix form, resolved by the fallback.
                    let prefixed = match &url[0] {
                        UrlPart::Lit(text) => {
                            UrlPart::lit(format!("{}{}", services[target.owner], text))
                        }
                        UrlPart::Hole(_) => unreachable!("urls start with the literal head"),
                    };
                    url[0] = prefixed;
                }
                let expected = PlantedTarget {
                    service: target.def.service.clone(),
                    path: target.def.path.render(),
                    method: target.def.method.clone(),
                };
                record(&mut truth, &services[caller], &target.def);
                (caller, url, target.def.method.clone(), Some(expected), target.def.return_type.clone())
            }
            PlantedKind::Ambiguous => {
                let (ia, ib) = twins[g.pick(twins.len())];
                let (a, b) = (&endpoints[ia], &endpoints[ib]);
                let mut caller = g.pick(services.len());
                while caller == a.owner || caller == b.owner {
                    caller = (caller + 1) % services.len();
                }
                let url = instantiate_url(&mut g, &a.def, None);
                let winner = if a.def.service <= b.def.service { &a.def } else { &b.def };
                let expected = PlantedTarget {
                    service: winner.service.clone(),
                    path: winner.path.render(),
                    method: winner.method.clone(),
                };
                truth.ambiguous_count += 1;
                record(&mut truth, &services[caller], winner);
                (caller, url, a.def.method.clone(), Some(expected), a.def.return_type.clone())
            }
            PlantedKind::Unmatched => {
                let caller = g.pick(services.len());
                if !plain.is_empty() && services.len() > 1 && g.chance(0.4) {
                    // A self-call: the only matching endpoint belongs to the
                    // caller, and self-dependencies are discarded.
                    let target = &endpoints[plain[g.pick(plain.len())]];
                    let url = instantiate_url(
                        &mut g,
                        &target.def,
                        Some(services[target.owner].as_str()),
                    );
                    truth.unmatched_count += 1;
                    (target.owner, url, target.def.method.clone(), None, "unknown".to_string())
                } else {
                    let path = format!("/{}/{}", g.fresh_token("op"), g.fresh_token("seg"));
                    truth.unmatched_count += 1;
                    (caller, vec![UrlPart::lit(path)], random_method(&mut g), None, "unknown".to_string())
                }
            }
            PlantedKind::Unresolvable => {
                let caller = g.pick(services.len());
                let url = vec![UrlPart::hole("String")];
                (caller, url, random_method(&mut g), None, "unknown".to_string())
            }
        };
        let source_loc =
            SourceLoc { file: format!("gen/{}/Caller.java", services[caller]), line: (n + 1) as u32 };
        truth.calls.push(PlantedCall { source_loc: source_loc.clone(), kind, expected });
        let arg_count = 1 + url.iter().filter(|p| matches!(p, UrlPart::Hole(_))).count() as u32;
        calls.push(RestCall {
            caller: services[caller].clone(),
            url,
            method,
            arg_count,
            expected_return_type: return_type,
            source_loc,
            unresolvable: matches!(kind, PlantedKind::Unresolvable),
        });
    }

    // Entity groups: one shared name per group, one member per service, a
    // common field so the pair clears the matched-field minimum. Cross-group
    // names are pre-filtered to stay far below the similarity threshold.
    let dict = SynonymDict::default();
    let mut names: Vec<&str> = Vec::new();
    for word in ENTITY_WORDS {
        let far = names.iter().all(|kept| {
            name_similarity(word, kept, &dict).map(|s| s <= 0.7).unwrap_or(false)
        });
        if far {
            names.push(word);
        }
    }
    let mut entities: Vec<EntityDef> = Vec::new();
    let mut group = 0usize;
    while entities.len() < sizes.entities && group < names.len() {
        let remaining = sizes.entities - entities.len();
        let max_members = services.len().min(remaining).min(4);
        let members = 1 + g.pick(max_members);
        let first = g.pick(services.len());
        let member_services: Vec<usize> =
            (0..members).map(|k| (first + k) % services.len()).collect();
        let name = names[group];
        for (k, &svc) in member_services.iter().enumerate() {
            let kind = if g.chance(0.5) { EntityKind::Persistent } else { EntityKind::Dto };
            entities.push(EntityDef {
                service: services[svc].clone(),
                name: name.to_string(),
                fields: vec![
                    EntityField { name: "id".into(), type_name: "Integer".into() },
                    EntityField {
                        name: format!("{}Code", name.to_lowercase()),
                        type_name: "String".into(),
                    },
                ],
                kind: kind.clone(),
                annotations: vec![match kind {
                    EntityKind::Persistent => "Entity".to_string(),
                    EntityKind::Dto => "Data".to_string(),
                }],
                source_loc: SourceLoc {
                    file: format!("gen/{}/{}.java", services[svc], name),
                    line: (k + 1) as u32,
                },
            });
        }
        for i in 0..member_services.len() {
            for j in (i + 1)..member_services.len() {
                let (a, b) = (&services[member_services[i]], &services[member_services[j]]);
                if a != b {
                    let key = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
                    *truth.ddm_cells.entry(key).or_insert(0) += 1;
                }
            }
        }
        group += 1;
    }

    let mut ir = SystemIR::new(SystemMeta {
        source_root: "generated".to_string(),
        revision: format!("seed-{seed}"),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    });
    ir.services = services;
    ir.endpoints = endpoints.into_iter().map(|e| e.def).collect();
    ir.calls = calls;
    ir.entities = entities;
    ir.normalize();
    ir.validate()?;
    Ok((ir, truth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{match_entities, resolve_calls, SimilarityConfig, TypePatternSet};
    use crate::matrix::{build_ddm, build_edm};

    fn sizes(services: usize, endpoints: usize, calls: usize, entities: usize) -> SystemSizes {
        SystemSizes { services, endpoints, calls, entities }
    }

    #[test]
    fn same_seed_reproduces_the_system() {
        let a = generate_ir_system(7, sizes(4, 12, 20, 8)).unwrap();
        let b = generate_ir_system(7, sizes(4, 12, 20, 8)).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
        let c = generate_ir_system(8, sizes(4, 12, 20, 8)).unwrap();
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn zero_sizes_are_rejected() {
        assert!(generate_ir_system(1, sizes(0, 5, 5, 5)).is_err());
        assert!(generate_ir_system(1, sizes(3, 5, 0, 5)).is_err());
    }

    #[test]
    fn generated_systems_validate() {
        for seed in [1, 2, 3] {
            let (ir, _) = generate_ir_system(seed, sizes(5, 20, 40, 12)).unwrap();
            ir.validate().unwrap();
        }
    }

    fn check_truth(seed: u64, s: SystemSizes) {
        let (ir, truth) = generate_ir_system(seed, s).unwrap();
        let outcome = resolve_calls(&ir, &TypePatternSet::default());
        let by_loc: BTreeMap<(String, u32), _> = outcome
            .matches
            .iter()
            .map(|m| ((m.call.source_loc.file.clone(), m.call.source_loc.line), m))
            .collect();
        let unmatched: BTreeSet<(String, u32)> = outcome
            .unmatched
            .iter()
            .map(|c| (c.source_loc.file.clone(), c.source_loc.line))
            .collect();
        for planted in &truth.calls {
            let key = (planted.source_loc.file.clone(), planted.source_loc.line);
            match planted.kind {
                PlantedKind::Clean | PlantedKind::Ambiguous => {
                    let m = by_loc.get(&key).unwrap_or_else(|| {
                        panic!("planted {:?} call at {:?} not matched", planted.kind, key)
                    });
                    let want = planted.expected.as_ref().unwrap();
                    assert_eq!(m.endpoint.service, want.service, "at {key:?}");
                    assert_eq!(m.endpoint.path.render(), want.path, "at {key:?}");
                    assert_eq!(m.endpoint.method, want.method, "at {key:?}");
                    assert_eq!(
                        m.ambiguous,
                        planted.kind == PlantedKind::Ambiguous,
                        "at {key:?}"
                    );
                }
                PlantedKind::Unmatched => {
                    assert!(unmatched.contains(&key), "planted unmatched at {key:?}");
                }
                PlantedKind::Unresolvable => {
                    assert!(!unmatched.contains(&key) && !by_loc.contains_key(&key));
                }
            }
        }
        assert_eq!(outcome.unmatched.len() as u32, truth.unmatched_count);
        assert_eq!(
            outcome.matches.iter().filter(|m| m.ambiguous).count() as u32,
            truth.ambiguous_count
        );
        let edm = build_edm(&outcome.matches, &ir.service_ids());
        let got: BTreeMap<(String, String), u32> = edm
            .cells()
            .map(|(a, b, v)| ((a.to_string(), b.to_string()), v))
            .collect();
        assert_eq!(got, truth.edm_cells);
    }

    #[test]
    fn resolver_reproduces_planted_truth() {
        check_truth(1, sizes(3, 6, 10, 5));
        check_truth(2, sizes(6, 24, 48, 10));
        check_truth(3, sizes(10, 50, 100, 20));
        check_truth(4, sizes(1, 3, 8, 3));
        check_truth(5, sizes(2, 8, 16, 6));
    }

    #[test]
    fn entity_groups_reproduce_planted_data_dependencies() {
        for seed in [11, 12, 13] {
            let (ir, truth) = generate_ir_system(seed, sizes(5, 10, 10, 14)).unwrap();
            let (_, equivalence) =
                match_entities(&ir, &SimilarityConfig::default()).unwrap();
            let ddm = build_ddm(&equivalence, &ir.service_ids());
            let got: BTreeMap<(String, String), u32> = ddm
                .cells()
                .map(|(a, b, v)| ((a.to_string(), b.to_string()), v))
                .collect();
            assert_eq!(got, truth.ddm_cells, "seed {seed}");
        }
    }

    #[test]
    fn ambiguity_requires_three_services() {
        let (_, truth) = generate_ir_system(9, sizes(2, 12, 24, 4)).unwrap();
        assert_eq!(truth.ambiguous_count, 0);
        let (_, truth) = generate_ir_system(9, sizes(5, 16, 24, 4)).unwrap();
        assert!(truth.ambiguous_count > 0);
    }
}
