use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermibound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn bounds_from_query_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.json");
    std::fs::write(&path, r#"{"p": 1, "family": {"type": "star", "n": 5}, "graph": {"n": 5, "edges": [[0, 1], [0, 2], [0, 3], [0, 4]]}, "cover": [0]}"#).unwrap();
    let out = run(&["bounds", "--input", path.to_str().unwrap(), "--theorems", "thm1,cor4,cor5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert!((r["value"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    }
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(run(&["bounds", "--input", "/nonexistent/q.json"]).status.code(), Some(2));
    assert_eq!(run(&["verify-monogamy", "--graph", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["witness", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn witness_reproduces_saturation() {
    let out = run(&["witness", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["measured"].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn violation_exits_1() {
    // no floating-point result meets a zero-width tolerance band this narrow
    assert_eq!(run(&["witness", "--n", "5", "--tol", "1e-300"]).status.code(), Some(1));
}

#[test]
fn monogamy_witness_ratio() {
    let out = run(&["verify-monogamy", "--n", "6", "--witness"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["max_ratio"].as_f64().unwrap() - 0.25).abs() < 1e-9);
}

#[test]
fn monogamy_random_trials() {
    let out = run(&["verify-monogamy", "--n", "6", "--trials", "200", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["violations"].as_u64(), Some(0));
}

#[test]
fn two_site_certificate() {
    let out = run(&["ground-cert", "--length", "2", "--open"]);
    assert_eq!(out.status.code(), Some(0));
    let c = &json(&out)["certificate"];
    assert!((c["e_gs"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert!((c["delta"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn negative_couplings_and_sweeps() {
    let out = run(&["ground-cert", "--length", "4", "--u", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["ground-cert", "--length", "4", "--sweep-u", "-1,0,1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn nonconvergence_exits_3() {
    let out = run(&["ground-cert", "--family", "spinful", "--length", "2", "--u", "-3", "--max-iters", "1", "--restarts", "8"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["certificate"]["converged"], Value::Bool(false));
}

#[test]
fn csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("witness.csv");
    let out = run(&["witness", "--n", "4", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().count() > 1);
}

#[test]
fn definetti_is_deterministic() {
    let args = ["definetti-approx", "--n", "4", "--k", "2", "--trials", "3", "--seed", "5"];
    let a = run(&[&args[..], &["--threads", "1"]].concat());
    let b = run(&[&args[..], &["--threads", "3"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(v["measured"].as_f64().unwrap() <= v["bound"].as_f64().unwrap());
}
