use std::process::{Command, Output};

use serde_json::Value;

fn hecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(args)
        .env_remove("HECKE_TYPE")
        .env_remove("HECKE_FORMAT")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = hecke(&all);
    let v = serde_json::from_slice(&out.stdout).expect("JSON on stdout");
    (out.status.code().unwrap(), v)
}

#[test]
fn a3_torsion_relations_pass() {
    let (code, v) = json(&["verify", "--type", "A3", "--families", "T1,T2,T3,T4"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 12);
}

#[test]
fn refined_braid_i2_7_passes() {
    let (code, v) = json(&["verify", "--type", "I2(7)", "--families", "refined-braid"]);
    assert_eq!(code, 0);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn a1_has_order_two() {
    let (code, v) = json(&["group", "--type", "A1"]);
    assert_eq!(code, 0);
    assert_eq!(v["info"]["order"], 2);
}

#[test]
fn errors_are_structured() {
    let out = hecke(&["verify", "--type", "A2", "--families", "t1"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(v["error"]["message"].as_str().unwrap().contains("torsion"));
    let out = hecke(&["group", "--type", "Z9"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hecke(&["verify", "--type", "A2", "--families", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn environment_supplies_defaults_and_flags_win() {
    let out = Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(["group", "--format", "json"])
        .env("HECKE_TYPE", "B2")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["info"]["order"], 8);
    let out = Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(["group", "--type", "A2"])
        .env("HECKE_FORMAT", "json")
        .env("HECKE_TYPE", "B2")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["info"]["order"], 6);
}

#[test]
fn matrix_file_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("b2.txt");
    std::fs::write(&m, "1 4\n4 1\n").unwrap();
    let cache = dir.path().join("kl.json");
    let (m, cache) = (m.to_str().unwrap(), cache.to_str().unwrap());
    let (code, v) = json(&["kl", "--matrix", m, "--cache", cache, "--w", "s1s2s1s2"]);
    assert_eq!(code, 0);
    assert_eq!(v["info"]["polynomials"].as_array().unwrap().len(), 8);
    assert!(std::path::Path::new(cache).exists());
    let (code, _) = json(&["kl", "--matrix", m, "--cache", cache]);
    assert_eq!(code, 0);
}

#[test]
fn factorize_and_standard_paths() {
    let (code, v) = json(&["factorize", "--type", "A3", "--i", "2", "--j", "13"]);
    assert_eq!(code, 0);
    assert!(!v["info"]["factorizations"].as_array().unwrap().is_empty());
    let (code, v) = json(&["factorize", "--type", "A3", "--i", "0", "--j", "0", "--d", "s1s2s3s1"]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), 1);
    let (code, v) = json(&["standard-paths", "--type", "I2(5)", "--jobs", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["info"]["total"], 49);
}

#[test]
fn csv_and_text_output() {
    let out = hecke(&["verify", "--type", "I2(3)", "--families", "j1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("system,family,instance,passed,detail"));
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")));
    let out = hecke(&["verify", "--type", "I2(3)", "--families", "j1"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("ALL PASS"));
}
