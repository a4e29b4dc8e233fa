//! Integration tests for the `symidx` binary: subcommands, formats and exit
//! codes (0 success, 2 validation, 4 strict mismatch).

use std::io::Write;
use std::process::{Command, Output};

fn symidx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symidx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn catalog_list_has_at_least_eight_entries() {
    let output = symidx(&["catalog", "list", "--format", "json"]);
    assert!(output.status.success());
    let entries: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert!(entries.as_array().unwrap().len() >= 8);

    let text = symidx(&["catalog", "list"]);
    assert!(text.status.success());
    let body = stdout(&text);
    assert!(body.contains("stiefel-5-3"));
    assert!(body.contains("literature"));
    assert!(body.contains("[gated]"));
}

#[test]
fn analyze_stiefel_reports_exact_index_one() {
    let output = symidx(&["analyze", "catalog:stiefel-4-2", "--format", "json"]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["index"]["value"], 1);
    assert_eq!(report["index"]["status"], "EXACT");
    assert_eq!(report["checks"]["symmetry_equals_fixed"]["status"], "PASS");
}

#[test]
fn tolerance_flag_threads_through_to_the_report() {
    let output = symidx(&[
        "analyze",
        "catalog:stiefel-4-2",
        "--tolerance",
        "1e-9",
        "--format",
        "json",
    ]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["tolerance"], 1e-9);
    assert_eq!(report["index"]["value"], 1);

    let seeded = symidx(&[
        "analyze",
        "catalog:stiefel-4-2",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&seeded)).unwrap();
    assert_eq!(report["seed"], 7);
}

#[test]
fn analyze_t1s3_reports_lower_bound_index_two() {
    let output = symidx(&["analyze", "catalog:t1s3", "--format", "json"]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["index"]["value"], 2);
    assert_eq!(report["index"]["status"], "LOWER_BOUND");

    // Under --strict a lower bound with expected values present fails.
    let strict = symidx(&["analyze", "catalog:t1s3", "--strict"]);
    assert_eq!(strict.status.code(), Some(4));
}

#[test]
fn catalog_analyze_diffs_against_expected() {
    let output = symidx(&["catalog", "analyze", "aloff-wallach"]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("expected values: all match"));

    let unknown = symidx(&["catalog", "analyze", "no-such-space"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn strict_catalog_analyze_passes_on_exact_entries() {
    let output = symidx(&["catalog", "analyze", "stiefel-5-3", "--strict"]);
    assert!(output.status.success());
}

#[test]
fn malformed_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    let mut f = std::fs::File::create(&path).unwrap();
    // Isotropy missing entirely.
    write!(
        f,
        r#"{{
            "name": "broken",
            "algebra": {{"dim": 3, "structure": [[0,1,2,1.0],[1,2,0,1.0],[2,0,1,1.0]]}},
            "isotropy": {{}},
            "metric": {{"mode": "NORMAL", "form": "identity"}}
        }}"#
    )
    .unwrap();
    let output = symidx(&["analyze", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn gated_entry_exits_two_without_data() {
    let output = symidx(&["analyze", "catalog:wallach-24"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("gated"));
}

#[test]
fn check_reports_classification_flags() {
    let output = symidx(&["check", "catalog:sphere-3"]);
    assert!(output.status.success());
    let body = stdout(&output);
    assert!(body.contains("normal = true"));
    assert!(body.contains("naturally reductive = true"));

    let t1s3 = symidx(&["check", "catalog:t1s3", "--format", "json"]);
    assert!(t1s3.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&t1s3)).unwrap();
    assert_eq!(report["flags"]["is_naturally_reductive"], false);
}

#[test]
fn check_localizes_jacobi_failures() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("jacobi.json");
    std::fs::write(
        &path,
        r#"{
            "name": "perturbed",
            "algebra": {"dim": 3, "structure": [[0,1,2,1.0],[0,1,0,0.1],[1,2,0,1.0],[2,0,1,1.0]]},
            "isotropy": {"basis": []},
            "metric": {"mode": "NORMAL", "form": "identity"}
        }"#,
    )
    .unwrap();
    let output = symidx(&["check", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    let body = stdout(&output);
    assert!(body.contains("jacobi"));
    assert!(body.contains("FAIL"));
}

#[test]
fn file_based_analysis_matches_catalog_analysis() {
    let entry = symmetry_index::catalog::find("stiefel-5-2").unwrap();
    let space = entry.build().unwrap();
    let description = symmetry_index::spacefile::SpaceDescription::from_space(
        "stiefel-5-2",
        &space,
        entry.assertions,
    );
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stiefel-5-2.json");
    std::fs::write(&path, description.to_json()).unwrap();

    let from_file = symidx(&["analyze", path.to_str().unwrap(), "--format", "json"]);
    assert!(from_file.status.success());
    let from_catalog = symidx(&["analyze", "catalog:stiefel-5-2", "--format", "json"]);
    assert!(from_catalog.status.success());
    assert_eq!(stdout(&from_file), stdout(&from_catalog));
}
