//! Black-box tests of the installed binary: exit codes, produced files and
//! the printed summaries, driven against the committed minimart fixtures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn depmat(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_depmat"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn analyze_writes_all_reports_and_prints_the_summary() {
    let dir = tempfile::tempdir().unwrap();
    let src = fixture("minimart");
    let out = depmat(&["analyze", src.to_str().unwrap(), "--out", "reports"], dir.path());
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "services=4 endpoints=9 calls=7 matched=5 unmatched=1 ambiguous=1 \
         entities=6 entityClasses=1\n"
    );
    let reports = dir.path().join("reports");
    for name in [
        "analysis.json",
        "edm.csv",
        "ddm.csv",
        "sdm.csv",
        "hotspots.csv",
        "edm.svg",
        "ddm.svg",
        "sdm.svg",
    ] {
        assert!(reports.join(name).is_file(), "missing {name}");
    }
}

#[test]
fn format_flag_selects_the_emitted_files() {
    let dir = tempfile::tempdir().unwrap();
    let src = fixture("minimart");
    let out =
        depmat(&["analyze", src.to_str().unwrap(), "--out", "j", "--format", "json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("j/analysis.json").is_file());
    assert!(!dir.path().join("j/edm.csv").exists());
    assert!(!dir.path().join("j/edm.svg").exists());
}

#[test]
fn empty_source_tree_exits_with_the_dedicated_code() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("README.md"), "nothing here\n").unwrap();
    let out = depmat(&["analyze", ".", "--out", "reports"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error:"), "stderr: {}", stderr(&out));
}

#[test]
fn missing_source_path_is_a_fatal_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = depmat(&["analyze", "no/such/checkout", "--out", "reports"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("depmat.toml"), "bogusKey = 1\n").unwrap();
    let src = fixture("minimart");
    let out = depmat(
        &["analyze", src.to_str().unwrap(), "--config", "depmat.toml", "--out", "r"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("config"), "stderr: {}", stderr(&out));
}

#[test]
fn config_file_lowers_the_hotspot_threshold() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("depmat.toml"), "[hotspots]\nminCalls = 1\n").unwrap();
    let src = fixture("minimart");
    let out = depmat(
        &["analyze", src.to_str().unwrap(), "--config", "depmat.toml", "--out", "r"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let hotspots = std::fs::read_to_string(dir.path().join("r/hotspots.csv")).unwrap();
    assert!(hotspots.contains("mm-user-service,/api/v1/users/{String},GET,2,2"));
}

#[test]
fn exported_facts_validate_and_reproduce_the_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let src = fixture("minimart");
    let src = src.to_str().unwrap();

    let out = depmat(&["ir", "export", src, "facts.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("facts.json"));

    let out = depmat(&["ir", "validate", "facts.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("ok (4 services, 9 endpoints, 7 calls, 6 entities)"));

    let direct = depmat(&["analyze", src, "--out", "a"], dir.path());
    assert_eq!(direct.status.code(), Some(0));
    let replayed = depmat(&["analyze", "--ir-in", "facts.json", "--out", "b"], dir.path());
    assert_eq!(replayed.status.code(), Some(0), "stderr: {}", stderr(&replayed));
    let a = std::fs::read_to_string(dir.path().join("a/analysis.json")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("b/analysis.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn validate_rejects_corrupt_fact_files() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("facts.json"), "{\"services\": 5}").unwrap();
    let out = depmat(&["ir", "validate", "facts.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn diff_reports_changes_with_its_own_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let v1 = fixture("minimart");
    let v2 = fixture("minimart-v2");
    let out = depmat(
        &["diff", v1.to_str().unwrap(), v2.to_str().unwrap(), "--kind", "sdm", "--out", "d"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("sdm: 0 added, 3 removed, 1 changed"), "stdout: {text}");
    assert!(text.contains("mm-payment-service"));

    let diff: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("d/diff.json")).unwrap())
            .unwrap();
    assert_eq!(diff["kind"], "sdm");
    assert_eq!(diff["removed"].as_array().unwrap().len(), 3);
    assert_eq!(diff["changed"][0]["row"], "mm-payment-service");
    assert_eq!(diff["changed"][0]["old"], "0.1");
    assert_eq!(diff["changed"][0]["new"], "1");
}

#[test]
fn identical_versions_diff_clean() {
    let dir = tempfile::tempdir().unwrap();
    let v1 = fixture("minimart");
    let v1 = v1.to_str().unwrap();
    let out = depmat(&["diff", v1, v1, "--kind", "edm", "--out", "d"], dir.path());
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), "edm: no changes\n");
}

#[test]
fn diff_accepts_previously_written_reports_as_input() {
    let dir = tempfile::tempdir().unwrap();
    let v1 = fixture("minimart");
    let v2 = fixture("minimart-v2");
    let a = depmat(&["analyze", v1.to_str().unwrap(), "--out", "a"], dir.path());
    assert_eq!(a.status.code(), Some(0));
    let b = depmat(&["analyze", v2.to_str().unwrap(), "--out", "b"], dir.path());
    assert_eq!(b.status.code(), Some(0));

    let out = depmat(
        &["diff", "a/analysis.json", "b/analysis.json", "--kind", "edm", "--out", "d"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).starts_with("edm: 1 added, 0 removed, 0 changed"));
}

#[test]
fn hotspots_prints_an_aligned_table() {
    let dir = tempfile::tempdir().unwrap();
    let src = fixture("minimart");
    let out = depmat(&["hotspots", src.to_str().unwrap(), "--min-calls", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("service"), "header expected: {text}");
    assert!(text.contains("mm-user-service"));
    assert!(text.contains("/api/v1/users/{String}"));

    let quiet = depmat(&["hotspots", src.to_str().unwrap()], dir.path());
    assert_eq!(quiet.status.code(), Some(0));
    assert_eq!(stdout(&quiet), "no endpoints with more than 3 calls\n");
}
