//! Black-box tests of the binary: exit codes, round trips, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_equidist")
}

fn fixture(name: &str) -> String {
    format!("{}/../../configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn tmpdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("equidist-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

#[test]
fn classify_is_deterministic() {
    let a = run(&["classify", &fixture("sqrt2_cos_sqrt3.json")]);
    let b = run(&["classify", &fixture("sqrt2_cos_sqrt3.json")]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "byte-identical reports");
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("\"uniform\": \"Guaranteed\""));
    assert!(text.contains("rationally independent"), "assumption printed");
}

#[test]
fn analyze_is_deterministic_across_thread_counts() {
    let args = [
        "analyze",
        &fixture("sqrt2.json"),
        "--n",
        "5000",
        "--weyl",
        "1",
    ];
    let a = run(&[&args[..], &["--threads", "1"]].concat());
    let b = run(&[&args[..], &["--threads", "8"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn gen_csv_shape() {
    let out = run(&["gen", &fixture("sqrt2.json"), "--range", "1,5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,coord0,wrap");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("1,0.4142135623730950488"));
}

#[test]
fn usage_errors_exit_1() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["classify", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(1));
    // schema error names the offending field
    let dir = tmpdir();
    let bad = dir.join("bad_schema.json");
    std::fs::write(&bad, r#"{"basis": [], "sequence": {"kind": "scalar"}}"#).unwrap();
    let out = run(&["classify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn precision_failure_exits_2() {
    let dir = tmpdir();
    let cfg = dir.join("starved.json");
    std::fs::write(
        &cfg,
        r#"{
            "basis": [{"name":"c1","kind":"decimal","digits":"0.12345678901234567890123","bits":64}],
            "sequence": {"kind":"scalar","p0":{"coeffs":[["c1","1"]]}}
        }"#,
    )
    .unwrap();
    let out = run(&["gen", cfg.to_str().unwrap(), "--range", "1,3", "-F", "64"]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn construct_verify_round_trip_scalar() {
    let dir = tmpdir();
    let plan = dir.join("scalar_plan.json");
    let cfg = dir.join("scalar_cfg.json");
    let out = run(&[
        "construct",
        &fixture("counterexample_scalar_request.json"),
        "--out",
        plan.to_str().unwrap(),
        "--emit-config",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    // the emitted config classifies NotUD (provenance-marked)
    let out = run(&["classify", cfg.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"uniform\": \"NotUD\""));
    // verify passes
    let out = run(&["verify", plan.to_str().unwrap(), "--n", "4000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    // tampering with the recorded floor flips verification to exit 3
    let tampered = dir.join("tampered_plan.json");
    let text = std::fs::read_to_string(&plan).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["mass_floor"] = serde_json::Value::String("99/100".into());
    std::fs::write(&tampered, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let out = run(&["verify", tampered.to_str().unwrap(), "--n", "4000"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn construct_verify_round_trip_nodist() {
    let dir = tmpdir();
    let plan = dir.join("nodist_plan.json");
    let request = dir.join("nodist_request_small.json");
    std::fs::write(
        &request,
        r#"{
            "basis": [{"name": "sqrt2", "kind": "sqrt", "of": "2"}],
            "kind": "nodist",
            "alpha": {"gen": "sqrt2"},
            "depth": 1,
            "scan_limit": 65536
        }"#,
    )
    .unwrap();
    let out = run(&["construct", request.to_str().unwrap(), "--out", plan.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["verify", plan.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn witness_and_dirichlet_subcommands() {
    let out = run(&[
        "witness",
        &fixture("sqrt2.json"),
        "--target",
        "1/2",
        "--eps",
        "1/50",
        "--nmax",
        "10000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["found"].as_u64().is_some());

    let out = run(&[
        "dirichlet",
        &fixture("sqrt2_cos_sqrt3.json"),
        "--thetas",
        r#"{"gen":"sqrt2"};{"gen":"sqrt3"}"#,
        "-Q",
        "20",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["k"].as_u64().unwrap() <= 400);
}

#[test]
fn independence_subcommand() {
    let out = run(&["independence", &fixture("sqrt2_cos_sqrt3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        v["rational_independence_of_alpha_and_reciprocal_periods"]["independent"],
        serde_json::Value::Bool(true)
    );
}

#[test]
fn analyze_emits_histogram() {
    let dir = tmpdir();
    let hist = dir.join("hist.dat");
    let out = run(&[
        "analyze",
        &fixture("sqrt2.json"),
        "--n",
        "2000",
        "--grid",
        "16",
        "--emit-hist",
        hist.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&hist).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 16);
    for l in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        assert_eq!(parts.len(), 2);
        let _: f64 = parts[0].parse().unwrap();
        let _: f64 = parts[1].parse().unwrap();
    }
}

#[test]
fn classify_counterexample_class_fires_r1_and_r7() {
    let out = run(&["classify", &fixture("counterexample_class.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"id\": \"R1\""));
    assert!(text.contains("\"id\": \"R7\""));
    assert!(text.contains("NotGuaranteedCounterexampleExistsInClass"));
    assert!(text.contains("\"counterexample_kind\": \"scalar\""));
}
