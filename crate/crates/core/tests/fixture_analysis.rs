//! End-to-end analysis of the committed minimart fixture: four Spring
//! services with one ambiguous, one unmatched and one unresolvable call, and
//! one entity shared by three services.

use std::collections::BTreeMap;
use std::path::PathBuf;

use depmat_core::matrix::hotspots;
use depmat_core::model::{EntityKind, HttpMethod, SystemMeta};
use depmat_core::pipeline::{analyze_checkout, AnalysisReport, AnalysisSettings};
use depmat_core::render::emit_json;

fn fixture_root(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn analyze_minimart(settings: &AnalysisSettings) -> AnalysisReport {
    let root = fixture_root("minimart");
    analyze_checkout(&root, SystemMeta::unversioned("fixtures/minimart"), settings)
        .expect("fixture analysis succeeds")
}

#[test]
fn summary_counts_match_the_fixture() {
    let report = analyze_minimart(&AnalysisSettings::default());
    let summary = report.summary();
    let expected: BTreeMap<&str, u64> = [
        ("services", 4),
        ("endpoints", 9),
        ("calls", 7),
        ("matched", 5),
        ("unmatched", 1),
        ("ambiguous", 1),
        ("entities", 6),
        ("entityClasses", 1),
    ]
    .into_iter()
    .collect();
    assert_eq!(summary, expected);
}

#[test]
fn endpoint_matrix_has_exactly_the_declared_client_calls() {
    let report = analyze_minimart(&AnalysisSettings::default());
    let cells: Vec<(&str, &str, u32)> = report.edm.cells().collect();
    assert_eq!(
        cells,
        vec![
            ("mm-order-service", "mm-catalog-service", 1),
            ("mm-order-service", "mm-user-service", 1),
            ("mm-payment-service", "mm-user-service", 1),
            ("mm-user-service", "mm-catalog-service", 1),
            ("mm-user-service", "mm-order-service", 1),
        ]
    );
}

#[test]
fn shared_dto_links_three_services_pairwise() {
    let report = analyze_minimart(&AnalysisSettings::default());
    let classes = &report.equivalence.classes;
    assert_eq!(classes.len(), 1);
    assert_eq!(
        classes[0].representative,
        ("mm-catalog-service".to_string(), "ItemDto".to_string())
    );
    assert_eq!(classes[0].members.len(), 3);

    for (a, b) in [
        ("mm-catalog-service", "mm-order-service"),
        ("mm-catalog-service", "mm-payment-service"),
        ("mm-order-service", "mm-payment-service"),
    ] {
        assert_eq!(report.ddm.get(a, b), 1, "{a} <-> {b}");
        assert_eq!(report.ddm.get(b, a), 1, "symmetric {b} <-> {a}");
    }
    assert_eq!(report.ddm.get("mm-catalog-service", "mm-catalog-service"), 0);
    assert_eq!(report.ddm.get("mm-catalog-service", "mm-user-service"), 0);
}

#[test]
fn merged_matrix_carries_both_degrees() {
    let report = analyze_minimart(&AnalysisSettings::default());
    let both = report.sdm.get("mm-order-service", "mm-catalog-service").unwrap();
    assert_eq!((both.endpoint_degree, both.data_degree), (1, 1));
    let data_only = report.sdm.get("mm-catalog-service", "mm-order-service").unwrap();
    assert_eq!((data_only.endpoint_degree, data_only.data_degree), (0, 1));
    let calls_only = report.sdm.get("mm-user-service", "mm-order-service").unwrap();
    assert_eq!((calls_only.endpoint_degree, calls_only.data_degree), (1, 0));
    assert!(report.sdm.get("mm-catalog-service", "mm-user-service").is_none());
}

#[test]
fn ambiguous_status_probe_picks_the_lexicographic_twin() {
    let report = analyze_minimart(&AnalysisSettings::default());
    let ambiguous: Vec<_> = report.matches.iter().filter(|m| m.ambiguous).collect();
    assert_eq!(ambiguous.len(), 1);
    let m = ambiguous[0];
    assert_eq!(m.call.caller, "mm-user-service");
    assert_eq!(m.endpoint.service, "mm-catalog-service");
    assert_eq!(m.endpoint.path.render(), "/api/v1/status/{String}");
    assert_eq!(m.specificity, 3);
}

#[test]
fn receipt_call_stays_unmatched_and_dynamic_call_is_skipped() {
    let report = analyze_minimart(&AnalysisSettings::default());
    assert_eq!(report.unmatched.len(), 1);
    assert!(report.unmatched[0].url_display().contains("/payment/receipt/"));

    let dynamic: Vec<_> = report.ir.calls.iter().filter(|c| c.unresolvable).collect();
    assert_eq!(dynamic.len(), 1);
    assert_eq!(dynamic[0].caller, "mm-catalog-service");

    let mut codes: Vec<&str> = report.diagnostics.iter().map(|d| d.code.as_str()).collect();
    codes.sort();
    assert_eq!(codes, vec!["ambiguous-match", "unmatched-call", "unresolvable-call"]);
}

#[test]
fn entity_extraction_excludes_clients_and_controllers() {
    let report = analyze_minimart(&AnalysisSettings::default());
    let entities: Vec<(&str, &str, &EntityKind)> = report
        .ir
        .entities
        .iter()
        .map(|e| (e.service.as_str(), e.name.as_str(), &e.kind))
        .collect();
    assert_eq!(
        entities,
        vec![
            ("mm-catalog-service", "Item", &EntityKind::Persistent),
            ("mm-catalog-service", "ItemDto", &EntityKind::Dto),
            ("mm-order-service", "ItemDto", &EntityKind::Dto),
            ("mm-order-service", "Order", &EntityKind::Persistent),
            ("mm-payment-service", "ItemDto", &EntityKind::Dto),
            ("mm-user-service", "User", &EntityKind::Persistent),
        ]
    );
}

#[test]
fn user_lookup_is_the_only_hotspot_at_low_threshold() {
    let report = analyze_minimart(&AnalysisSettings::default());
    assert!(report.hotspots.is_empty(), "default threshold needs more than 3 calls");

    let rows = hotspots(&report.matches, 1);
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert_eq!(row.endpoint.service, "mm-user-service");
    assert_eq!(row.endpoint.path.render(), "/api/v1/users/{String}");
    assert_eq!(row.endpoint.method, HttpMethod::Get);
    assert_eq!(row.call_count, 2);
    assert_eq!(row.distinct_callers, 2);
}

#[test]
fn strict_mode_drops_the_ambiguous_probe_from_the_matrices() {
    let strict = AnalysisSettings { strict: true, ..Default::default() };
    let report = analyze_minimart(&strict);
    assert_eq!(report.matches.len(), 4);
    assert!(report.matches.iter().all(|m| !m.ambiguous));
    assert_eq!(report.edm.get("mm-user-service", "mm-catalog-service"), 0);
    assert!(report.diagnostics.iter().any(|d| d.code == "strict-excluded"));
}

#[test]
fn repeated_runs_serialize_identically() {
    let settings = AnalysisSettings::default();
    let first = emit_json(&analyze_minimart(&settings));
    let second = emit_json(&analyze_minimart(&settings));
    assert_eq!(first, second);
}
