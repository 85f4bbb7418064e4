//! End-to-end tests of the `rank3` binary: exit-code contract, record
//! shapes, format switching, and byte-level determinism.

use std::process::{Command, Output};

fn rank3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rank3"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_records(out: &Output) -> Vec<serde_json::Value> {
    serde_json::from_slice(&out.stdout).expect("valid JSON output")
}

#[test]
fn dimension_counts_and_exit_zero() {
    let out = rank3(&["dimension", "--g", "1..3", "--window", "4"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let records = json_records(&out);
    let counts: Vec<u64> = records
        .iter()
        .map(|r| r["standard_monomial_count"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, vec![1, 9, 25]);
    assert!(records
        .iter()
        .all(|r| r["match"] == serde_json::json!(true)));
    assert!(records.iter().all(|r| r["identity"].is_string()));
}

#[test]
fn euler_group_two_rank_three() {
    let out = rank3(&["euler", "--group", "2", "--N", "3"]);
    assert!(out.status.success());
    let records = json_records(&out);
    assert_eq!(records[0]["direct"], serde_json::json!(4));
    assert_eq!(records[0]["orbit_formula"], serde_json::json!(4));
}

#[test]
fn spectrum_genus_one_has_three_tuples() {
    let out = rank3(&["spectrum", "--g", "1", "--d", "1"]);
    assert!(out.status.success());
    assert_eq!(json_records(&out).len(), 3);
}

#[test]
fn invalid_parameters_exit_two() {
    // inadmissible degree
    let out = rank3(&["spectrum", "--g", "1", "--d", "3"]);
    assert_eq!(out.status.code(), Some(2));
    // malformed range is a clap error, also 2
    let out = rank3(&["dimension", "--g", "3..1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identical_configs_are_byte_identical() {
    let a = rank3(&["dimension", "--g", "1..2"]);
    let b = rank3(&["dimension", "--g", "1..2"]);
    assert_eq!(a.stdout, b.stdout);
    let a = rank3(&["series", "--check", "blowup", "--order", "6"]);
    let b = rank3(&["series", "--check", "blowup", "--order", "6"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_format_flattens() {
    let out = rank3(&["euler", "--group", "2,4", "--N", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.split(',').any(|h| h == "direct"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn relations_emit_polynomial_text() {
    let out = rank3(&["relations", "--g", "1", "--m-max", "1"]);
    assert!(out.status.success());
    let records = json_records(&out);
    assert!(records
        .iter()
        .any(|r| r["m"] == serde_json::json!(1) && r["polynomial"] == serde_json::json!("-a2")));
}

#[test]
fn alexander_trefoil_square() {
    let out = rank3(&["alexander", "--delta=-1,1"]);
    assert!(out.status.success());
    let records = json_records(&out);
    assert_eq!(records[0]["modes_agree"], serde_json::json!(true));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.json");
    let out = rank3(&["dimension", "--g", "1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("dimension-census"));
}

#[test]
fn series_accepts_spec_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    // diagonal <1> + <-1> with one characteristic class and a real coefficient
    std::fs::write(
        &path,
        serde_json::json!({
            "q": [[1, 0], [0, -1]],
            "classes": [[1, 1]],
            "coeffs": [{"i": 0, "j": 0, "c": ["2", "0", "0", "0"]}],
            "w": [1, 0],
        })
        .to_string(),
    )
    .unwrap();
    let out = rank3(&[
        "series",
        "--check",
        "blowup",
        "--order",
        "6",
        "--input",
        path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let records = json_records(&out);
    assert_eq!(records[0]["plain_pass"], serde_json::json!(true));
    assert_eq!(records[0]["through_e_pass"], serde_json::json!(true));

    // a non-characteristic class is rejected with usage exit code
    std::fs::write(
        &path,
        serde_json::json!({
            "q": [[1]],
            "classes": [[0]],
            "coeffs": [],
            "w": [0],
        })
        .to_string(),
    )
    .unwrap();
    let out = rank3(&[
        "series",
        "--check",
        "blowup",
        "--input",
        path.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
}

#[test]
fn verify_all_small_passes() {
    let out = rank3(&["verify-all", "--g-max", "1", "--order", "5"]);
    assert!(
        out.status.success(),
        "verify-all failed: {}",
        String::from_utf8_lossy(&out.stdout)
    );
    let records = json_records(&out);
    assert!(records.iter().all(|r| r["pass"] == serde_json::json!(true)));
}
