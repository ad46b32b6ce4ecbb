use std::path::PathBuf;
use std::process::{Command, Output};

use fockweyl::correspondences::weyl0_symbol_trace;
use fockweyl::gaussian::GaussianKernelOp;
use fockweyl::C64;
use serde_json::Value;

fn fockweyl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fockweyl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn complex(v: &Value) -> C64 {
    C64::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn temp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fockweyl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_group_passes_and_is_deterministic() {
    let (a, b) = (temp("a.json"), temp("b.json"));
    for path in [&a, &b] {
        let out = fockweyl(&["verify", "--suite", "group", "--seed", "11", "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (ra, rb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ra, rb);
    let report: Value = serde_json::from_slice(&ra).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["summary"]["pass"], true);
    let suites = report["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 7);
    let skipped: Vec<_> = suites.iter().filter(|s| s["status"] == "skipped").collect();
    assert_eq!(skipped.len(), 6);
    assert!(skipped.iter().all(|s| s["reason"].is_string()));
}

#[test]
fn impossible_tolerance_fails_with_nonzero_exit() {
    let config = temp("strict.json");
    std::fs::write(
        &config,
        r#"{"lambda": 1, "n": 1, "m": 1, "alpha": [[0.8]], "beta": [0], "tolerances": {"group": 1e-20}}"#,
    )
    .unwrap();
    let out = fockweyl(&["verify", "--suite", "group", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["summary"]["pass"], false);
    let checks = report["suites"][0]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["pass"] == false && c["tolerance"].as_f64() == Some(1e-20)));
}

#[test]
fn invalid_input_is_reported() {
    let out = fockweyl(&["verify", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));
    let config = temp("bad.json");
    std::fs::write(&config, r#"{"lambda": 1, "n": 2, "m": 1, "alpha": [[0.8]], "beta": [0]}"#).unwrap();
    let out = fockweyl(&["verify", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = fockweyl(&["star-exp", "--c0", "0", "--a", "0", "--b", "0", "--at", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("b[0]"));
}

#[test]
fn identity_element_gives_identity_kernel() {
    let out = fockweyl(&["kernel", "pi", "--g", r#"{"t":[0],"z0":[[0,0]],"c0":0}"#]);
    assert!(out.status.success());
    let k: GaussianKernelOp = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(k.param_distance(&GaussianKernelOp::identity(1, 1.0)), 0.0);
}

#[test]
fn symbol_matches_library() {
    let projector = r#"{"c":[1,0],"a":[[0,0]],"b":[[0,0]],"Q":[[[0,0]]],"lambda":1}"#;
    let out = fockweyl(&["symbol", "--kind", "weyl0", "--op", projector, "--at", "0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let k: GaussianKernelOp = serde_json::from_str(projector).unwrap();
    let expected = weyl0_symbol_trace(&k, &[C64::new(0.0, 0.0)]).unwrap();
    assert!((complex(&json(&out)["value"]) - expected).norm() < 1e-15);
}

#[test]
fn star_exp_pure_quadratic_value() {
    let (b, x, y): (f64, f64, f64) = (0.6, 0.3, -0.4);
    let out = fockweyl(&["star-exp", "--c0", "0", "--a", "0", "--b", "0.6", "--at", "[[0.3,-0.4]]"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let value = complex(&json(&out)["value"]);
    let expected = (C64::i() * (x * x + y * y) * b.tan()).exp() / b.cos();
    assert!((value - expected).norm() < 1e-12);
}

#[test]
fn star_and_orbit_commands() {
    let out = fockweyl(&["star", "--product", "star0", "--f", "z1", "--g", "zb1"]);
    assert!(out.status.success());
    let terms = json(&out)["product"].as_array().unwrap().clone();
    assert_eq!(terms.len(), 2);
    assert!(terms.iter().any(|t| t["p"] == serde_json::json!([0]) && t["re"].as_f64() == Some(-1.0)));
    let out = fockweyl(&["orbit", "--z", "[[1,2]]"]);
    assert!(out.status.success());
    let xi = json(&out);
    assert_eq!(xi["d"].as_f64(), Some(1.0));
    assert_eq!(xi["v"], serde_json::json!([[-1.0, -2.0]]));
}
