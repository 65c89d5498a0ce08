//! End-to-end runs of the `qspace` binary.

use std::process::{Command, Output};

fn qspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qspace"))
        .args(args)
        .env_remove("QSPACE_FORMAT")
        .env_remove("QSPACE_RELATIONS_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = qspace(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn apply_examples() {
    assert_eq!(ok(&["apply", "--space", "euclid3", "--gen", "d-", "--f", "x+"]).trim(), "(-1/q)");
    assert_eq!(ok(&["apply", "--space", "euclid3", "--gen", "Lambda+", "--f", "x3"]).trim(), "(q^2)*x3");
    assert_eq!(ok(&["apply", "--gen", "d3", "--f", "1"]).trim(), "0");
}

#[test]
fn apply_agrees_with_oracle_flag() {
    for f in ["x+^2*x3", "x-*x3^2"] {
        let closed = ok(&["apply", "--gen", "d+", "--f", f]);
        let oracle = ok(&["apply", "--gen", "d+", "--f", f, "--oracle"]);
        assert_eq!(closed, oracle);
    }
}

#[test]
fn json_output() {
    let out = ok(&["--format", "json", "apply", "--gen", "d-", "--f", "x+"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"], "(-1/q)");
    let o = Command::new(env!("CARGO_BIN_EXE_qspace"))
        .args(["verify", "--space", "euclid3", "--degree", "0"])
        .env("QSPACE_FORMAT", "json")
        .output()
        .unwrap();
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["summary"]["failed"], 0);
    assert_eq!(v["summary"]["total"].as_u64().unwrap() as usize, v["cases"].as_array().unwrap().len());
}

#[test]
fn reduce_d() {
    assert_eq!(ok(&["reduce-d", "--orders", "1", "--bases", "1"]).trim(), "(1/1!) d/dx");
    let two = ok(&["reduce-d", "--orders", "2", "--bases", "a", "--f", "x^3"]);
    assert!(two.contains("brute force: (1+2*a)*x"), "{two}");
    assert!(two.contains("reduced: (1+2*a)*x"), "{two}");
    assert!(two.contains("equal: true"), "{two}");
    let split = ok(&["reduce-d", "--orders", "1,1", "--bases", "a,a", "--f", "x^3"]);
    assert_eq!(split, two);
}

#[test]
fn normal_order_and_star() {
    assert_eq!(ok(&["normal-order", "--space", "euclid3", "--expr", "d- x+"]).trim(), "(-1/q) + (q^4)*x+ d-");
    assert_eq!(ok(&["star", "--space", "euclid3", "--f", "x+", "--g", "x-"]).trim(), "x+*x-");
}

#[test]
fn uhat_round_trip() {
    let f = "x+*x-";
    let there = ok(&["uhat", "--space", "euclid3", "--f", f]);
    let back = ok(&["uhat", "--space", "euclid3", "--inverse", "--f", there.trim()]);
    assert_eq!(back.trim(), f);
}

#[test]
fn hopf_check() {
    let out = ok(&["hopf-check", "--space", "euclid3", "--gen", "d+", "--f", "x+", "--g", "x3"]);
    assert!(out.contains("equal: true"), "{out}");
}

#[test]
fn verify_slices() {
    for (space, degree) in [("euclid3", "0"), ("minkowski", "1"), ("euclid3", "6")] {
        let out = ok(&["verify", "--space", space, "--degree", degree]);
        assert!(out.contains(" 0 failed"), "{out}");
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| qspace(args).status.code();
    assert_eq!(code(&["apply", "--gen", "bogus", "--f", "x+"]), Some(2));
    assert_eq!(code(&["apply", "--gen", "d-", "--f", "x+ +"]), Some(2));
    assert_eq!(code(&["apply", "--gen", "d-"]), Some(2));
    assert_eq!(code(&["--relations-dir", "/nonexistent", "apply", "--gen", "d-", "--f", "x+"]), Some(3));
}

#[test]
fn relations_dir_override() {
    let dir = std::env::temp_dir().join(format!("qspace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let shipped = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/euclid3.relations");
    std::fs::copy(shipped, dir.join("euclid3.relations")).unwrap();
    let out = ok(&["--relations-dir", dir.to_str().unwrap(), "apply", "--gen", "d-", "--f", "x+"]);
    assert_eq!(out.trim(), "(-1/q)");
    std::fs::remove_dir_all(&dir).unwrap();
}
