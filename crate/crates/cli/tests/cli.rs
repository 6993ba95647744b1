use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_halftwist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const MATRIX_A_CSV: &str = "3,2,0,0,0,2\n6,3,2,4,0,4\n12,6,3,6,0,8\n0,0,2,3,2,0\n4,0,4,6,3,2\n6,0,8,12,6,3\n";

#[test]
fn matrix_csv_for_phi() {
    let o = run(&["matrix", "--partition", "0,3;1,4;2,5", "--powers", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), MATRIX_A_CSV);
}

#[test]
fn n_alone_selects_the_partition_with_most_sets() {
    let o = run(&["matrix", "--n", "6"]);
    assert_eq!(stdout(&o), MATRIX_A_CSV);
}

#[test]
fn matrix_json_entries_are_decimal_strings() {
    let o = run(&["matrix", "--example", "phi", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[2][0], "12");
    assert_eq!(v.as_array().unwrap().len(), 6);
}

#[test]
fn analyze_json_reports_trace_field() {
    let o = run(&["analyze", "--partition", "0,3;1,4;2,5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["q_string"], "y - 18");
    assert_eq!(v["certification"]["certified"], true);
    assert_eq!(v["classification"]["neither_construction"], false);
}

#[test]
fn analyze_is_byte_identical_across_runs() {
    let args = ["analyze", "--example", "psi_prime", "--precision", "1e-12"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.md");
    let o = run(&["analyze", "--example", "psi", "--format", "md", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, run(&["analyze", "--example", "psi", "--format", "md"]).stdout);
}

#[test]
fn analyze_csv_has_field_value_rows() {
    let text = stdout(&run(&["analyze", "--example", "phi_bar_prime", "--format", "csv"]));
    assert!(text.starts_with("field,value\n"));
    assert!(text.contains("q,y^3 - 22y^2 + 124y - 232\n"));
    assert!(text.contains("totally_real,false\n"));
}

#[test]
fn one_based_labels_are_echoed_and_normalized() {
    let text = stdout(&run(&["build", "--partition", "1,4;2,5;3,6", "--one-based"]));
    assert!(text.contains("partition (0-based): `0,3;1,4;2,5`"), "{text}");
    assert!(text.contains("D_6^2"), "{text}");
    let csv = stdout(&run(&[
        "matrix",
        "--partition",
        "1,4;2,5;3,6",
        "--one-based",
        "--powers-json",
        r#"{"1":2,"2":2,"3":2,"4":2,"5":2,"6":2}"#,
    ]));
    assert_eq!(csv, MATRIX_A_CSV);
}

#[test]
fn modified_and_staggered_words_build() {
    let o = run(&["build", "--n", "6", "--modify", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 7);
    let o = run(&["matrix", "--n", "6", "--staggered"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn validation_failures_exit_2() {
    for args in [
        &["build", "--partition", "0,1;2,3"][..],
        &["build", "--partition", "0,2;1,3;4"],
        &["build", "--partition", "0,3;1,4;2,5", "--powers", "0"],
        &["build", "--partition", "x;y"],
        &["build", "--n", "6", "--partition", "0,2;1,3"],
        &["build", "--partition", "1,3;2,4", "--one-based", "--powers-json", r#"{"0":2}"#],
        &["analyze", "--example", "phi", "--precision", "-1"],
        &["matrix", "--example", "nope"],
        &["matrix", "--n", "6", "--format", "xml"],
        &["survey", "--n-min", "9", "--n-max", "5"],
        &["survey", "--n-max", "40"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn not_carried_exits_3() {
    let o = run(&["matrix", "--n", "6", "--custom", "--partition", "0,3;2,5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not carried"));
}

#[test]
fn survey_rows_are_sorted_and_deterministic() {
    let args = ["survey", "--n-min", "4", "--n-max", "9", "--modify", "1", "--format", "json"];
    let a = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, run(&args).stdout);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&a)).unwrap();
    let keys: Vec<(u64, String)> = rows
        .iter()
        .map(|r| (r["n"].as_u64().unwrap(), r["partition"].as_str().unwrap().to_string()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let csv = stdout(&run(&["survey", "--n", "6", "--format", "csv"]));
    assert_eq!(csv.lines().count(), 1 + 2);
}

#[test]
fn verify_paper_exit_code_matches_its_checklist() {
    let o = run(&["verify-paper"]);
    let text = stdout(&o);
    let items: Vec<&str> = text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert_eq!(items.len(), 37);
    let all_pass = items.iter().all(|l| l.starts_with("PASS"));
    assert_eq!(o.status.code(), Some(if all_pass { 0 } else { 2 }));
    assert!(text.contains("PASS 1a"));

    let json = run(&["verify-paper", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["items"].as_array().unwrap().len(), 37);
}
