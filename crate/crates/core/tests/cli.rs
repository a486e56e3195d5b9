use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sugeno-bounds")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn integrate_counting_example() {
    let path = data("counting_five.json");
    let out = run(&["integrate", "--op", "min", "--instance", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], 3.0);
    let out = run(&["integrate", "--op", "min", "--transform", "--instance", path.to_str().unwrap()]);
    assert_eq!(json(&out)["value"], 3.0);
}

#[test]
fn bound_flo_is_tight_on_counting_example() {
    let path = data("counting_five.json");
    let out = run(&["bound", "--id", "flo", "--instance", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["holds"], true);
    assert_eq!(v["slack"], 0.0);
}

#[test]
fn profile_integral_of_square_root() {
    let path = data("lebesgue_sqrt.json");
    let out = run(&["--tol", "1e-10", "integrate", "--transform", "--profile", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let value = json(&out)["value"].as_f64().unwrap();
    assert!((value - (21f64.sqrt() - 1.0) / 2.0).abs() < 1e-9);
}

#[test]
fn unmet_hypothesis_exits_2() {
    // noo1 needs a subadditive measure
    let path = data("three_point.json");
    let out = run(&["bound", "--id", "noo1", "--instance", path.to_str().unwrap()]);
    let v = json(&out);
    assert_eq!(v["hypotheses_hold"], false);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn signed_bound_and_symmetric_integral() {
    let path = data("signed_cube.json");
    let out = run(&["bound", "--id", "001", "--instance", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["holds"], true);
    let out = run(&["integrate", "--symmetric", "--star", "ovee", "--transform", "--instance", path.to_str().unwrap()]);
    assert_eq!(json(&out)["value"], 0.3);
}

#[test]
fn verify_predicates_on_three_point_measure() {
    let path = data("three_point.json");
    let out = run(&["verify", "--predicate", "weakly-subadditive", "--A", "0,1", "--instance", path.to_str().unwrap()]);
    assert_eq!(json(&out)["holds"], true);
    let out = run(&["verify", "--predicate", "subadditive", "--instance", path.to_str().unwrap()]);
    let v = json(&out);
    assert_eq!(v["holds"], false);
    assert!(v["witness"].is_array());
}

#[test]
fn fuzz_exit_codes() {
    let out = run(&["--seed", "3", "fuzz", "--trials", "300", "--bounds", "ss1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["violations"].as_array().unwrap().len(), 0);
    let out = run(&["--seed", "3", "fuzz", "--trials", "50", "--bounds", "nn1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!json(&out)["violations"].as_array().unwrap().is_empty());
}

#[test]
fn fuzz_is_deterministic() {
    let a = json(&run(&["--seed", "9", "fuzz", "--trials", "100", "--bounds", "tw1i,nn1"]));
    let b = json(&run(&["--seed", "9", "fuzz", "--trials", "100", "--bounds", "tw1i,nn1"]));
    assert_eq!(a["digest"], b["digest"]);
}

#[test]
fn reproduce_all_passes() {
    let out = run(&["reproduce", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["fixtures"].as_array().unwrap().len(), 8);
    let out = run(&["--pretty", "reproduce", "sec4_1"]);
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("note:"));
}

#[test]
fn reproduce_single_exponent() {
    let out = run(&["reproduce", "ex2_9", "--q", "2"]);
    let v = json(&out);
    let checks = v["fixtures"][0]["checks"].as_array().unwrap();
    assert_eq!(checks[0]["value"], 0.25);
    assert!((checks[1]["value"].as_f64().unwrap() - 4.0 / 27.0).abs() < 1e-9);
}

#[test]
fn malformed_json_exits_1_with_location() {
    let dir = std::env::temp_dir().join(format!("sugeno-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{\"n\": 2,\n \"measure\": [1, }").unwrap();
    let out = run(&["integrate", "--instance", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn json_out_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("sugeno-cli-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = run(&["--pretty", "--json-out", path.to_str().unwrap(), "reproduce", "ex2_4"]);
    assert_eq!(out.status.code(), Some(0));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(saved["pass"], true);
    assert!(String::from_utf8(out.stdout).unwrap().contains("PASS"));
}

#[test]
fn unknown_bound_is_an_error() {
    let path = data("three_point.json");
    let out = run(&["bound", "--id", "nope", "--instance", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
