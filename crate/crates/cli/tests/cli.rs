use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn vlike(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vlike"))
        .args(args)
        .env_remove("VLIKE_DEFAULT_WINDOW")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report on stdout")
}

#[test]
fn validate_catalog_entry() {
    let out = vlike(&["spectrum", "validate", "--catalog", "a2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn validate_reports_grading_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(
        &path,
        r#"{"dim": 2, "eta": [["0","1"],["1","0"]], "mu": ["-1/2","1/2"], "R": {"1": [["0","1"],["0","0"]]}}"#,
    )
    .unwrap();
    let out = vlike(&["spectrum", "validate", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("R_1"), "{stderr}");
}

#[test]
fn malformed_json_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{\"dim\": 2, \"eta\": [").unwrap();
    let out = vlike(&["spectrum", "validate", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(vlike(&["verify", "virasoro", "--catalog", "e8"]).status.code(), Some(2));
}

#[test]
fn virasoro_suite_passes() {
    let out = vlike(&["verify", "virasoro", "--catalog", "dim1", "--m-max", "4", "--window", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["failed"], 0);
    let rec = &v["records"][0];
    for field in ["identity", "indices", "window", "verified", "status"] {
        assert!(!rec[field].is_null(), "missing {field}");
    }
}

#[test]
fn structure_constants_suite_passes() {
    let out = vlike(&["verify", "structure-constants", "--catalog", "a2", "--m-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn genus_zero_from_potential_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a2.json");
    let p = vlike_core::genus_zero::FrobeniusPotential::builtin("a2").unwrap();
    fs::write(&path, p.to_json()).unwrap();
    let out = vlike(&["verify", "genus0", "--potential", path.to_str().unwrap(), "--degree", "8"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = report(&out);
    let constraints: Vec<&Value> = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["identity"] == "genus-zero constraint")
        .collect();
    assert_eq!(constraints.len(), vlike_core::lie::admissible(3).len());
    for r in constraints {
        assert!(r["verified"]["degree"].as_u64().unwrap() >= 6);
    }
}

#[test]
fn small_window_is_inconclusive() {
    let out = vlike(&["verify", "virasoro", "--catalog", "dim1", "--m-max", "4", "--window", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(report(&out)["failed"], 0);
}

#[test]
fn window_default_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_vlike"))
        .args(["verify", "half-twist", "--catalog", "dim1", "--n-max", "1"])
        .env("VLIKE_DEFAULT_WINDOW", "9")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["config"]["window"], 9);
    let out = Command::new(env!("CARGO_BIN_EXE_vlike"))
        .args(["verify", "half-twist", "--catalog", "dim1", "--n-max", "1", "--window", "10"])
        .env("VLIKE_DEFAULT_WINDOW", "9")
        .output()
        .unwrap();
    assert_eq!(report(&out)["config"]["window"], 10);
}

#[test]
fn export_constants_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, jobs) in [(&a, "1"), (&b, "4")] {
        let out = vlike(&[
            "export", "constants", "--catalog", "a2", "--m-max", "2", "--jobs", jobs, "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("m,k,n,l,h,value\n"));
    assert!(text.lines().any(|l| l == "1,0,1,0,0,0"));
    // [L_(1,2), L_(-1,0)] has identity coefficient -l/2 = -1 on A2
    assert!(text.lines().any(|l| l == "1,1,-1,0,central,-1"));
}

#[test]
fn csv_report_and_hodge_suite() {
    let out = vlike(&["verify", "hodge", "--catalog", "dim1", "--n-max", "1", "--sigma-degree", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("identity,indices,window,verified,status,detail"));
    assert!(text.lines().skip(1).filter(|l| !l.is_empty()).all(|l| l.contains(",pass,")));
}

#[test]
fn gamma_oracle_on_catalog() {
    let out = vlike(&["oracle", "gamma-check"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["passed"], 2);
}
