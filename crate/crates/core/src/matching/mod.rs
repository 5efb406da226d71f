pub mod entities;
pub mod path;
pub mod signature;
pub mod similarity;

use rayon::prelude::*;

use crate::model::{Diagnostic, EndpointDef, EndpointMatch, RestCall, SystemIR};
pub use entities::{match_entities, EntityEquivalence, EquivalenceClass};
pub use path::{normalize_call_url, normalize_raw, NormalizedTarget};
pub use signature::{match_signature, match_template, TypePattern, TypePatternSet};
pub use similarity::{levenshtein, name_similarity, tokenize, SimilarityConfig, SynonymDict};

/// Everything resolve_calls produces: the chosen match per resolvable call,
/// the calls nothing matched, and the ambiguity/fallback diagnostics.
#[derive(Debug, Clone, Default)]
pub struct ResolveOutcome {
    pub matches: Vec<EndpointMatch>,
    pub unmatched: Vec<RestCall>,
    pub diagnostics: Vec<Diagnostic>,
}

struct CallOutcome {
    matched: Option<EndpointMatch>,
    unmatched: Option<RestCall>,
    diagnostics: Vec<Diagnostic>,
}

/// Match every call in the system against its candidate endpoints and keep
/// the most specific hit per call.
///
/// Candidates are the target service's endpoints when the URL names a known
/// service (by hostname, or by first path segment as a fallback), otherwise
/// every service except the caller. Each candidate is evaluated
/// independently; the winner is the argmax by specificity with lexicographic
/// (service, path) tie-breaking, ties flagged ambiguous. Self-matches are
/// discarded. The per-call work is order-independent, so the call list is
/// processed in parallel and reassembled in input order.
pub fn resolve_calls(ir: &SystemIR, patterns: &TypePatternSet) -> ResolveOutcome {
    let outcomes: Vec<CallOutcome> = ir
        .calls
        .par_iter()
        .map(|call| resolve_one(call, ir, patterns))
        .collect();

    let mut result = ResolveOutcome::default();
    for outcome in outcomes {
        result.matches.extend(outcome.matched);
        result.unmatched.extend(outcome.unmatched);
        result.diagnostics.extend(outcome.diagnostics);
    }
    result
}

fn resolve_one(call: &RestCall, ir: &SystemIR, patterns: &TypePatternSet) -> CallOutcome {
    let mut diagnostics = Vec::new();
    if call.unresolvable {
        diagnostics.push(Diagnostic::warning(
            "unresolvable-call",
            format!("{} call has no resolvable url; excluded from matching", call.method),
            Some(call.source_loc.clone()),
        ));
        return CallOutcome { matched: None, unmatched: None, diagnostics };
    }
    let target = match normalize_call_url(&call.url) {
        Ok(t) => t,
        Err(_) => {
            diagnostics.push(Diagnostic::warning(
                "unresolvable-call",
                format!(
                    "{} call url normalizes to an empty path; excluded from matching",
                    call.method
                ),
                Some(call.source_loc.clone()),
            ));
            return CallOutcome { matched: None, unmatched: None, diagnostics };
        }
    };

    let known = |name: &str| ir.services.iter().any(|s| s == name);
    let mut call_path = target.path;
    let mut restrict: Option<String> = None;
    match target.host {
        Some(host) if known(&host) => restrict = Some(host),
        _ => {
            // No usable hostname: a leading segment naming a service is
            // treated as the target and stripped from the matched path.
            if let Some(first) = call_path.segments().first().and_then(|s| s.literal()) {
                if known(first) && call_path.segments().len() > 1 {
                    let service = first.to_string();
                    let rest = crate::model::path::PathTemplate::new(
                        call_path.segments()[1..].to_vec(),
                        call_path.has_trailing_wildcard(),
                    )
                    .expect("non-empty remainder");
                    diagnostics.push(Diagnostic::info(
                        "host-fallback",
                        format!("treating leading path segment {service:?} as the target service"),
                        Some(call.source_loc.clone()),
                    ));
                    call_path = rest;
                    restrict = Some(service);
                }
            }
        }
    }

    let candidates = ir.endpoints.iter().filter(|ep| match &restrict {
        Some(service) => &ep.service == service,
        None => ep.service != call.caller,
    });

    let mut best: Option<(u32, &EndpointDef)> = None;
    let mut tied_with_best = false;
    for endpoint in candidates {
        if endpoint.service == call.caller {
            continue;
        }
        let Some(m) = signature::match_normalized(call, &call_path, endpoint, patterns) else {
            continue;
        };
        match &best {
            None => best = Some((m.specificity, endpoint)),
            Some((top, winner)) => {
                use std::cmp::Ordering::*;
                match m.specificity.cmp(top) {
                    Greater => {
                        best = Some((m.specificity, endpoint));
                        tied_with_best = false;
                    }
                    Equal => {
                        tied_with_best = true;
                        let new_key =
                            (&endpoint.service, endpoint.path.render(), &endpoint.source_loc);
                        let old_key = (&winner.service, winner.path.render(), &winner.source_loc);
                        if new_key < old_key {
                            best = Some((m.specificity, endpoint));
                        }
                    }
                    Less => {}
                }
            }
        }
    }

    match best {
        Some((specificity, endpoint)) => {
            if tied_with_best {
                diagnostics.push(Diagnostic::warning(
                    "ambiguous-match",
                    format!(
                        "call matches multiple endpoints at specificity {specificity}; picked {} {}",
                        endpoint.service,
                        endpoint.path.render()
                    ),
                    Some(call.source_loc.clone()),
                ));
            }
            CallOutcome {
                matched: Some(EndpointMatch {
                    call: call.clone(),
                    endpoint: endpoint.clone(),
                    specificity,
                    ambiguous: tied_with_best,
                }),
                unmatched: None,
                diagnostics,
            }
        }
        None => CallOutcome { matched: None, unmatched: Some(call.clone()), diagnostics },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::path::PathTemplate;
    use crate::model::{
        EndpointDef, HttpMethod, ParamDef, ParamKind, SourceLoc, SystemIR, SystemMeta, UrlPart,
    };

    fn endpoint(service: &str, path: &str, method: HttpMethod, line: u32) -> EndpointDef {
        let path = PathTemplate::parse(path).unwrap();
        let params = (0..path.variable_count())
            .map(|i| ParamDef {
                name: format!("p{i}"),
                declared_type: "String".into(),
                kind: ParamKind::Path,
            })
            .collect();
        EndpointDef {
            service: service.into(),
            path,
            method,
            params,
            return_type: "unknown".into(),
            source_loc: SourceLoc { file: format!("{service}/C.java"), line },
        }
    }

    fn call(caller: &str, parts: Vec<UrlPart>, method: HttpMethod, line: u32) -> RestCall {
        RestCall {
            caller: caller.into(),
            url: parts,
            method,
            arg_count: 2,
            expected_return_type: "unknown".into(),
            source_loc: SourceLoc { file: format!("{caller}/Client.java"), line },
            unresolvable: false,
        }
    }

    fn system(endpoints: Vec<EndpointDef>, calls: Vec<RestCall>) -> SystemIR {
        let mut ir = SystemIR::new(SystemMeta::unversioned("."));
        let mut services: Vec<String> = endpoints
            .iter()
            .map(|e| e.service.clone())
            .chain(calls.iter().map(|c| c.caller.clone()))
            .collect();
        services.sort();
        services.dedup();
        ir.services = services;
        ir.endpoints = endpoints;
        ir.calls = calls;
        ir.normalize();
        ir.validate().unwrap();
        ir
    }

    #[test]
    fn single_candidate_matches() {
        let ir = system(
            vec![endpoint("svc-b", "/api/v1/items", HttpMethod::Get, 1)],
            vec![call(
                "svc-a",
                vec![UrlPart::lit("http://svc-b/api/v1/items")],
                HttpMethod::Get,
                1,
            )],
        );
        let out = resolve_calls(&ir, &TypePatternSet::default());
        assert_eq!(out.matches.len(), 1);
        assert!(out.unmatched.is_empty());
        assert!(!out.matches[0].ambiguous);
    }

    #[test]
    fn higher_specificity_wins_without_ambiguity() {
        let ir = system(
            vec![
                endpoint("svc-b", "/api/v1/items/special", HttpMethod::Get, 1),
                endpoint("svc-b", "/api/v1/items/{String}", HttpMethod::Get, 2),
            ],
            vec![call(
                "svc-a",
                vec![UrlPart::lit("http://svc-b/api/v1/items/special")],
                HttpMethod::Get,
                1,
            )],
        );
        let out = resolve_calls(&ir, &TypePatternSet::default());
        assert_eq!(out.matches.len(), 1);
        let m = &out.matches[0];
        assert_eq!(m.endpoint.path.render(), "/api/v1/items/special");
        assert_eq!(m.specificity, 4);
        assert!(!m.ambiguous);
        assert!(out.diagnostics.is_empty());
    }

    #[test]
    fn specificity_ties_pick_lexicographic_winner_and_flag() {
        let ir = system(
            vec![
                endpoint("svc-c", "/api/v1/status/{String}", HttpMethod::Get, 1),
                endpoint("svc-b", "/api/v1/status/{String}", HttpMethod::Get, 1),
            ],
            vec![call(
                "svc-a",
                vec![UrlPart::lit("/api/v1/status/"), UrlPart::hole("String")],
                HttpMethod::Get,
                1,
            )],
        );
        let out = resolve_calls(&ir, &TypePatternSet::default());
        assert_eq!(out.matches.len(), 1);
        let m = &out.matches[0];
        assert_eq!(m.endpoint.service, "svc-b");
        assert!(m.ambiguous);
        assert_eq!(out.diagnostics.len(), 1);
        assert_eq!(out.diagnostics[0].code, "ambiguous-match");
    }

    #[test]
    fn hostname_restricts_candidates() {
        // Identical endpoint shapes on two services; the hostname selects
        // svc-c unambiguously.
        let ir = system(
            vec![
                endpoint("svc-b", "/api/v1/items", HttpMethod::Get, 1),
                endpoint("svc-c", "/api/v1/items", HttpMethod::Get, 1),
            ],
            vec![call(
                "svc-a",
                vec![UrlPart::lit("http://svc-c/api/v1/items")],
                HttpMethod::Get,
                1,
            )],
        );
        let out = resolve_calls(&ir, &TypePatternSet::default());
        assert_eq!(out.matches.len(), 1);
        assert_eq!(out.matches[0].endpoint.service, "svc-c");
        assert!(!out.matches[0].ambiguous);
    }

    #[test]
    fn leading_service_segment_is_used_as_fallback_target() {
        let ir = system(
            vec![
                endpoint("svc-b", "/api/v1/items", HttpMethod::Get, 1),
                endpoint("svc-c", "/api/v1/items", HttpMethod::Get, 1),
            ],
            vec![call(
                "svc-a",
                vec![UrlPart::lit("/svc-c/api/v1/items")],
                HttpMethod::Get,
                1,
            )],
        );
        let out = resolve_calls(&ir, &TypePatternSet::default());
        assert_eq!(out.matches.len(), 1);
        assert_eq!(out.matches[0].endpoint.service, "svc-c");
        assert_eq!(out.diagnostics.len(), 1);
        assert_eq!(out.diagnostics[0].code, "host-fallback");
    }

    #[test]
    fn self_matches_are_discarded() {
        let ir = system(
            vec![endpoint("svc-a", "/api/v1/items", HttpMethod::Get, 1)],
            vec![call(
                "svc-a",
                vec![UrlPart::lit("http://svc-a/api/v1/items")],
                HttpMethod::Get,
                1,
            )],
        );
        let out = resolve_calls(&ir, &TypePatternSet::default());
        assert!(out.matches.is_empty());
        assert_eq!(out.unmatched.len(), 1);
    }

    #[test]
    fn unresolvable_calls_are_skipped_with_a_diagnostic() {
        let mut c = call("svc-a", vec![UrlPart::hole("String")], HttpMethod::Get, 1);
        c.unresolvable = true;
        let ir = system(vec![endpoint("svc-b", "/api/v1/items", HttpMethod::Get, 1)], vec![c]);
        let out = resolve_calls(&ir, &TypePatternSet::default());
        assert!(out.matches.is_empty());
        assert!(out.unmatched.is_empty());
        assert_eq!(out.diagnostics.len(), 1);
        assert_eq!(out.diagnostics[0].code, "unresolvable-call");
    }

    #[test]
    fn zero_candidates_goes_to_unmatched() {
        let ir = system(
            vec![endpoint("svc-b", "/api/v1/items", HttpMethod::Get, 1)],
            vec![call(
                "svc-a",
                vec![UrlPart::lit("http://svc-b/api/v1/receipts")],
                HttpMethod::Get,
                1,
            )],
        );
        let out = resolve_calls(&ir, &TypePatternSet::default());
        assert!(out.matches.is_empty());
        assert_eq!(out.unmatched.len(), 1);
    }
}
