use std::fs;
use std::process::{Command, Output};

use groupcut::presentation::{FinitePresentation, PresentationJson};
use groupcut::PwlFunction;
use serde_json::Value;

fn groupcut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groupcut")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn extremality_gmic_writes_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = groupcut(&["extremality", "--builtin", "gmic", "--f", "4/5", "--json", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["verdict"], "Extreme");
    assert_eq!(v["finite_dimension"], 0);
}

#[test]
fn perturbations_equiv7_has_one_basis_function_and_one_sample() {
    let out = groupcut(&["perturbations", "--builtin", "equiv7_example_1"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["basis"].as_array().unwrap().len(), 1);
    assert_eq!(v["equivariant_samples"].as_array().unwrap().len(), 1);
    for item in v["basis"].as_array().unwrap().iter().chain(v["equivariant_samples"].as_array().unwrap()) {
        assert_ne!(item["epsilon"], "0");
        let f = PwlFunction::from_json(&serde_json::from_value(item["function"].clone()).unwrap()).unwrap();
        assert!(!f.is_zero());
    }
}

#[test]
fn closure_plot_equiv7() {
    let out = groupcut(&["plot", "--builtin", "equiv7_example_1", "--what", "closure"]);
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert_eq!(svg.matches(r#"class="translation""#).count(), 1);
    assert_eq!(svg.matches(r#"class="reflection""#).count(), 1);
    assert_eq!(svg.matches(r#"class="component""#).count(), 1);
}

#[test]
fn closure_json_round_trips_and_is_deterministic() {
    let a = groupcut(&["closure", "--builtin", "equiv7_example_1"]);
    let b = groupcut(&["closure", "--builtin", "equiv7_example_1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    let pj: PresentationJson = serde_json::from_value(v["presentation"].clone()).unwrap();
    let p = FinitePresentation::from_json(&pj).unwrap();
    assert_eq!(serde_json::to_value(p.to_json()).unwrap(), v["presentation"]);
    assert_eq!(p.moves().len(), 2);
}

#[test]
fn function_json_input_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pi.json");
    let pi = groupcut::catalog::equiv7_example_1();
    fs::write(&path, pi.to_json_string()).unwrap();
    let out = groupcut(&["minimality", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["minimal"], true);
    let back = PwlFunction::from_json(&serde_json::from_value(v["function"].clone()).unwrap()).unwrap();
    assert!(back.same_function(&pi));
}

#[test]
fn input_errors_exit_nonzero() {
    assert_eq!(groupcut(&["extremality", "--builtin", "nope"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{ not json").unwrap();
    assert_eq!(groupcut(&["minimality", "--input", path.to_str().unwrap()]).status.code(), Some(2));
    assert!(!groupcut(&["minimality"]).status.success());
}

#[test]
fn budget_exhaustion_has_its_own_exit_code() {
    let out = groupcut(&["closure", "--builtin", "minimal_no_covered_interval", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["budget_exhausted"], true);
}

#[test]
fn any_verdict_exits_zero() {
    let out = groupcut(&["extremality", "--builtin", "minimal_no_covered_interval"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["verdict"], "Unsupported");
    let out = groupcut(&["extremality", "--builtin", "equiv7_example_1"]);
    assert_eq!(stdout_json(&out)["verdict"], "NotExtreme");
}

#[test]
fn grid_check_agrees_on_two_slope() {
    let out = groupcut(&["grid-check", "--builtin", "two_slope", "--f", "1/2", "--s", "4", "--oversample", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["grid_verdict"], "Extreme");
    assert_eq!(v["grid_free_verdict"], "Extreme");
}

#[test]
fn corpus_is_seeded() {
    let a = groupcut(&["corpus", "--seed", "3", "--count", "5", "--max-q", "6"]);
    let b = groupcut(&["corpus", "--seed", "3", "--count", "5", "--max-q", "6"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a).as_array().unwrap().len(), 5);
}

#[test]
fn svg_outputs_are_written() {
    let dir = tempfile::tempdir().unwrap();
    for what in ["function", "complex", "closure"] {
        let path = dir.path().join(format!("{what}.svg"));
        let out = groupcut(&["plot", "--builtin", "gmic", "--what", what, "--svg", path.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(fs::read_to_string(&path).unwrap().starts_with("<svg"));
    }
}
