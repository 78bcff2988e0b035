use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wallcross")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn walls_of_the_rank_two_example() {
    let t = data("toy_genus0.json");
    let out = run(&["walls", "--theory", &t, "--charge", "2,-1", "--delta-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let deltas: Vec<&str> = r["results"]["walls"].as_array().unwrap().iter().map(|w| w["delta"].as_str().unwrap()).collect();
    assert_eq!(deltas, ["1/1", "3/1"]);
    assert_eq!(r["results"]["walls"][0]["decompositions"][0]["framed"], "(1,-1)");
    let out = run(&["walls", "--theory", &t, "--charge", "1,5"]);
    assert_eq!(report(&out)["results"]["walls"], Value::Array(vec![]));
}

#[test]
fn reports_are_byte_stable() {
    let t = data("toy_genus1.json");
    let args = ["zfun", "--theory", &t, "--rank", "2", "--chamber", "inf", "--expand", "6"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r["results"]["palindromic"], true);
    assert_eq!(r["inputs_digest"].as_str().unwrap().len(), 64);
    let other = run(&["zfun", "--theory", &t, "--rank", "1", "--chamber", "inf"]);
    assert_ne!(report(&other)["inputs_digest"], r["inputs_digest"]);
}

#[test]
fn decimal_rational_names_the_field() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("decimal_theory.json");
    std::fs::write(
        &path,
        r#"{"genus": 0, "rank_cap": 1, "c": {"1": -2}, "higgs": {"1": {"0": "1.5"}}, "a_zero_minus": {}, "delta_max": "4"}"#,
    )
    .unwrap();
    let out = run(&["invariant", "--theory", path.to_str().unwrap(), "--charge", "1,0", "--chamber", "inf"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("higgs.1.0"), "{err}");
}

#[test]
fn usage_errors_exit_with_two() {
    let t = data("toy_genus0.json");
    assert_eq!(run(&["invariant", "--theory", &t, "--charge", "0,1", "--chamber", "inf"]).status.code(), Some(2));
    assert_eq!(run(&["invariant", "--theory", &t, "--charge", "1,0", "--chamber", "delta=0.5"]).status.code(), Some(2));
    assert_eq!(run(&["bell"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["walls", "--theory", "/nonexistent.json", "--charge", "1,0"]).status.code(), Some(2));
}

#[test]
fn critical_chamber_lists_neighbouring_walls() {
    let t = data("toy_genus0.json");
    let out = run(&["invariant", "--theory", &t, "--charge", "2,-1", "--chamber", "delta=3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("critical parameter") && err.contains("below 1/1") && err.contains("above 5/1"), "{err}");
}

#[test]
fn invariant_outside_the_window() {
    let t = data("toy_genus0.json");
    let out = run(&["invariant", "--theory", &t, "--charge", "1,5", "--chamber", "0-"]);
    assert_eq!(report(&out)["results"]["value"], "0/1");
    let out = run(&["invariant", "--theory", &t, "--charge", "1,-2", "--chamber", "delta=5/2+"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn check_commands_pass() {
    let t = data("toy_genus0.json");
    for args in [
        vec!["bell", "--n", "20"],
        vec!["hall-check", "--rank-cap", "3"],
        vec!["cross", "--theory", &t, "--charge", "2,-1", "--wall", "1"],
        vec!["cross", "--theory", &t, "--charge", "3,-2", "--wall", "0"],
        vec!["ks-check", "--theory", &t, "--alpha", "1,-1", "--beta", "1,0", "--wall", "1", "--Q", "2"],
        vec!["validate", "--theory", &t],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(report(&out)["pass"], true, "{args:?}");
    }
}

#[test]
fn failed_validation_exits_with_one() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("bad_ratio.json");
    std::fs::write(
        &path,
        r#"{"genus": 0, "rank_cap": 2, "c": {"1": -1, "2": -3}, "higgs": {}, "a_zero_minus": {}, "delta_max": "4"}"#,
    )
    .unwrap();
    let out = run(&["validate", "--theory", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["pass"], false);
}

#[test]
fn zero_higgs_generating_function_is_the_window() {
    let t = data("zero_higgs.json");
    let inf = report(&run(&["zfun", "--theory", &t, "--rank", "1", "--chamber", "inf"]));
    let low = report(&run(&["zfun", "--theory", &t, "--rank", "1", "--chamber", "0-"]));
    assert_eq!(inf["results"]["function"], low["results"]["function"]);
}
