use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trivec"))
        .args(args)
        .env_remove("TRIVEC_TOL")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn complex_list(v: &Value) -> Vec<(f64, f64)> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|z| (z[0].as_f64().unwrap(), z[1].as_f64().unwrap()))
        .collect()
}

#[test]
fn product_state_invariants_are_zero() {
    let out = run(&["invariants", &fixture("product.json"), "--oracle"]);
    assert!(out.status.success());
    let v = json(&out);
    for name in trivec::TangleReport::MEASURE_NAMES {
        assert!(v["tangles"][name].as_f64().unwrap().abs() < 1e-14, "{name}");
        assert!(v["oracle"][name].as_f64().unwrap().abs() < 1e-14, "{name}");
    }
}

#[test]
fn product_state_qvectors_are_zero() {
    let v = json(&run(&["qvec", &fixture("product.json")]));
    for p in v["partitions"].as_array().unwrap() {
        assert!(complex_list(&p["q"]).iter().all(|&(re, im)| re == 0.0 && im == 0.0));
    }
    assert_eq!(v["gauge"]["degenerate"], Value::Bool(true));
}

#[test]
fn qvec_single_partition() {
    let v = json(&run(&["qvec", &fixture("w.json"), "--partition", "2"]));
    let parts = v["partitions"].as_array().unwrap();
    assert_eq!(parts.len(), 1);
    assert_eq!(parts[0]["partition"], 2);
    assert_eq!(
        run(&["qvec", &fixture("w.json"), "--partition", "4"]).status.code(),
        Some(2)
    );
}

#[test]
fn malformed_state_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"amplitudes\": [\n    [1, 0],\n    oops\n  ]\n}\n").unwrap();
    let out = run(&["invariants", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn unnormalized_state_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("big.json");
    std::fs::write(
        &bad,
        r#"{"amplitudes": [[1,0],[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}"#,
    )
    .unwrap();
    assert_eq!(run(&["qvec", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn missing_file_and_unknown_recipe_exit_2() {
    assert_eq!(run(&["invariants", "/nonexistent/state.json"]).status.code(), Some(2));
    let out = run(&["recipe", "run", "no_such_recipe", "--input", &fixture("w.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("w_to_ghz"));
}

#[test]
fn wrong_input_fails_verification_with_exit_3() {
    let out = run(&["recipe", "run", "w_to_ghz", "--input", &fixture("bs.json"), "--verify"]);
    assert_eq!(out.status.code(), Some(3));
    // without --verify the same run is just a computation
    assert!(run(&["recipe", "run", "w_to_ghz", "--input", &fixture("bs.json")])
        .status
        .success());
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_trivec"))
        .args(["invariants", &fixture("w.json")])
        .env("TRIVEC_TOL", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_trivec"))
        .args(["invariants", &fixture("w.json"), "--oracle"])
        .env("TRIVEC_TOL", "1e-3")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(json(&out)["tolerance"].as_f64(), Some(1e-3));
}

#[test]
fn recipe_from_file() {
    let out = run(&[
        "recipe",
        "run",
        &fixture("entangle_bc.json"),
        "--input",
        &fixture("product.json"),
        "--verify",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["verified"], Value::Bool(true));
    assert!((v["final_tangles"]["tau_bc"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn recipe_list_names_builtins() {
    let v = json(&run(&["recipe", "list"]));
    assert_eq!(v, serde_json::json!(["w_to_ghz", "bs_to_ghz", "w_to_bs"]));
}

#[test]
fn evolve_tracks_agree() {
    let (s, h) = (fixture("w.json"), fixture("ham_xy_bc.json"));
    let both = json(&run(&["evolve", &s, "--ham", &h, "--t", "0.7"]));
    let state = json(&run(&["evolve", &s, "--ham", &h, "--t", "0.7", "--track", "state"]));
    let q = json(&run(&["evolve", &s, "--ham", &h, "--t", "0.7", "--track", "q"]));
    assert_eq!(both["state"], state["state"]);
    assert_eq!(both["propagated"], q["propagated"]);
    assert!(both["disagreement"].as_f64().unwrap() < 1e-12);
    // bc acts on partition 1
    let direct = complex_list(&state["qvectors"][0]["q"]);
    let carried = complex_list(&q["propagated"]["q"]);
    for (a, b) in direct.iter().zip(&carried) {
        assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
    }
}

#[test]
fn evolve_accepts_negative_time() {
    let out = run(&[
        "evolve",
        &fixture("ghz.json"),
        "--ham",
        &fixture("ham_xy_bc.json"),
        "--t",
        "-1.5",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn selftest_output_is_deterministic() {
    let a = run(&["selftest", "--seed", "5", "--count", "60"]);
    let b = run(&["selftest", "--seed", "5", "--count", "60"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["commutation"]["pairs_matching"], 105);
    assert!(v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn selftest_zero_count_passes() {
    let out = run(&["selftest", "--count", "0"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["passed"], Value::Bool(true));
}
