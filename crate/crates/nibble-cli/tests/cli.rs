//! End-to-end checks of the command-line surface: exit codes, report
//! round-trips, and the plain-text outputs.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nibble")).args(args).output().expect("launch CLI")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn nibble_report_on_generated_graph() {
    let out = run(&["nibble", "--gen", "barbell:3", "--phi", "0.2", "--b", "1", "--start", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("format = cut-report v1\n"));
    assert!(text.contains("members = 0 1 2"));
    assert!(text.contains("conductance = 1/7"));
}

#[test]
fn seed_drawn_start_is_reported() {
    let out = run(&["nibble", "--gen", "barbell:5", "--phi", "0.3", "--b", "1", "--seed", "9"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("start = "));
}

#[test]
fn missing_seed_without_start_is_an_input_error() {
    let out = run(&["nibble", "--gen", "barbell:5", "--phi", "0.3", "--b", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_generator_is_an_input_error() {
    let out = run(&["nibble", "--gen", "mystery:1", "--phi", "0.2", "--b", "1", "--start", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_input_file_is_an_input_error() {
    let out = run(&["conductance", "--input", "/nonexistent/graph.txt", "--set", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn conductance_prints_exact_fraction() {
    let out = run(&["conductance", "--gen", "barbell:3", "--set", "0,1,2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1/7\n");
}

#[test]
fn conductance_rejects_unknown_vertex() {
    let out = run(&["conductance", "--gen", "barbell:3", "--set", "0,99"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_finds_the_global_minimum() {
    let out = run(&["oracle", "--gen", "barbell:3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("min-conductance = 1/7"));
    assert!(text.contains("set = 0 1 2"));
}

#[test]
fn oracle_walk_masses_sum_to_one() {
    let out = run(&["oracle", "--gen", "barbell:3", "--steps", "3", "--start", "0"]);
    assert!(out.status.success());
    let total: f64 = stdout(&out)
        .lines()
        .map(|l| l.split_whitespace().nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn verify_accepts_generated_input_reports() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.txt");
    let out = run(&[
        "nibble", "--gen", "barbell:4", "--phi", "0.2", "--b", "1", "--start", "0",
        "--output", report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = run(&["verify", "--report", report.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("nibble: ok"));
}

#[test]
fn verify_round_trips_file_inputs_and_detects_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("graph.txt");
    let report = dir.path().join("report.txt");
    let out = run(&["gen", "--gen", "barbell:4", "--output", graph.to_str().unwrap()]);
    assert!(out.status.success());
    let out = run(&[
        "nibble", "--input", graph.to_str().unwrap(), "--phi", "0.2", "--b", "1", "--start", "0",
        "--output", report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = run(&["verify", "--report", report.to_str().unwrap(), "--input", graph.to_str().unwrap()]);
    assert!(out.status.success());

    // a different file must be rejected by the digest check
    let other = dir.path().join("other.txt");
    std::fs::write(&other, "0 1\n1 2\n").unwrap();
    let out = run(&["verify", "--report", report.to_str().unwrap(), "--input", other.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_checks_every_trial_in_a_multi_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.txt");
    let out = run(&[
        "partition", "--gen", "ring:4,6", "--theta", "0.7", "--p-fail", "0.25",
        "--seed", "2", "--trials", "3", "--output", report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = run(&["verify", "--report", report.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).matches("partition: ok").count(), 3);
}

#[test]
fn tampered_report_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.txt");
    let out = run(&[
        "nibble", "--gen", "barbell:4", "--phi", "0.2", "--b", "1", "--start", "0",
        "--output", report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&report).unwrap().replace("conductance = 1/13", "conductance = 1/14");
    std::fs::write(&report, text).unwrap();
    let out = run(&["verify", "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn generated_edge_list_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("graph.txt");
    let out = run(&["gen", "--gen", "ring:3,4", "--output", graph.to_str().unwrap()]);
    assert!(out.status.success());
    let out = run(&["conductance", "--input", graph.to_str().unwrap(), "--set", "0,1,2,3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1/7\n");
}
