use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

use serde_json::Value;

fn prism(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prism")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    static NEXT: AtomicUsize = AtomicUsize::new(0);
    let dir = std::env::temp_dir().join(format!("prism-cli-{}-{}", std::process::id(), NEXT.fetch_add(1, Ordering::Relaxed)));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn rational(v: &Value) -> f64 {
    let s = v.as_str().unwrap();
    match s.split_once('/') {
        Some((a, b)) => a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap(),
        None => s.parse().unwrap(),
    }
}

#[test]
fn ehrhart_value_at_one() {
    let out = prism(&["ehrhart", "--k", "7", "--c", "6,3,4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let at_one: f64 = v["ehrhart"].as_array().unwrap().iter().map(rational).sum();
    assert_eq!(at_one, 19.0);
}

#[test]
fn octahedron_hstar() {
    let out = prism(&["hstar", "--k", "2", "--c", "1,1,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["hstar"], serde_json::json!([1, 2, 1]));
    let text = prism(&["hstar", "--k", "2", "--c", "1,1,1,1", "--format", "text"]);
    assert_eq!(String::from_utf8(text.stdout).unwrap(), "[1, 2, 1]\n");
}

#[test]
fn output_is_deterministic() {
    let args = ["volume", "--k", "5", "--c", "2,3,1,4"];
    assert_eq!(prism(&args).stdout, prism(&args).stdout);
}

#[test]
fn fat_slices_and_csv() {
    let out = prism(&["count", "--a", "0", "--b", "2", "--c", "1,1,1", "--t", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "a,b,c,count,t\n0,2,\"[1,1,1]\",23,2\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(prism(&["ehrhart", "--k", "3"]).status.code(), Some(2));
    assert_eq!(prism(&["ehrhart", "--k", "3", "--c", "1,0"]).status.code(), Some(2));
    assert_eq!(prism(&["hstar", "--k", "4", "--c", "1,1"]).status.code(), Some(2));
    assert_eq!(prism(&["scan", "--max-n", "2", "--max-c", "2", "--tol", "-1"]).status.code(), Some(2));
    let out = prism(&["ehrhart", "--k", "3"]);
    assert!(String::from_utf8(out.stderr).unwrap().contains("--c"));
}

#[test]
fn identity_failure_exits_one_with_counterexample() {
    let out = prism(&["flag", "--c", "2,1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["pass"], Value::Bool(false));
    assert!(String::from_utf8(out.stderr).unwrap().contains("\"c\":[2,1]"));
    assert_eq!(prism(&["flag", "--c", "1,2"]).status.code(), Some(0));
}

#[test]
fn wperm_formula_and_enumeration() {
    let out = prism(&["wperm", "--n", "3", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["formula"], serde_json::json!([3, 3, 0]));
}

#[test]
fn verify_reports_every_check() {
    let out = prism(&["verify", "--max-n", "3", "--max-c", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["summary"]["failed"], serde_json::json!(0));
    let by_check = v["summary"]["by_check"].as_object().unwrap();
    for name in ["flag_three_way", "lah_roundtrip", "prism_closed_form", "uniform_matroid", "hstar_series_vs_combinatorial"] {
        assert!(by_check.contains_key(name), "{name}");
    }
    // non-monotone caps break the flag identity
    assert_eq!(prism(&["verify", "--max-n", "2", "--max-c", "2"]).status.code(), Some(1));
}

#[test]
fn scan_jsonl_schema_and_resume() {
    let path = scratch("scan.jsonl");
    let p = path.to_str().unwrap();
    let first = prism(&["scan", "--check", "unit-circle", "--max-n", "3", "--max-c", "2", "--out", p]);
    assert_eq!(first.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // Σ_{n≤3} 2^n · n instances
    assert_eq!(lines.len(), 2 + 8 + 24);
    for line in &lines {
        let r: Value = serde_json::from_str(line).unwrap();
        for key in ["n", "m", "c", "poly", "check", "pass", "detail"] {
            assert!(r.get(key).is_some(), "{key} missing in {line}");
        }
        assert_eq!(r["check"], "unit_circle");
    }
    let again = prism(&["scan", "--check", "unit-circle", "--max-n", "3", "--max-c", "2", "--out", p]);
    assert_eq!(again.status.code(), Some(0));
    let summary: Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(summary["written"], serde_json::json!(0));
    assert_eq!(summary["skipped"], serde_json::json!(34));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
}

#[test]
fn scan_hstar_records_carry_level() {
    let out = Command::new(env!("CARGO_BIN_EXE_prism"))
        .args(["scan", "--check", "real-rooted", "--max-n", "2", "--max-c", "2"])
        .env("PRISM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let first: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert!(first["m"].is_null());
    assert!(first["k"].is_u64());
}

#[test]
fn scan_interlace_findings_exit_one() {
    let out = prism(&["scan", "--check", "interlace", "--max-n", "2", "--max-c", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("\"c\":[2,2]"));
}

#[test]
fn empty_grid_is_empty_output() {
    let path = scratch("empty.jsonl");
    let out = prism(&["scan", "--max-n", "0", "--max-c", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "");
}

#[test]
fn unwritable_output_exits_three() {
    let out = prism(&["scan", "--max-n", "1", "--max-c", "1", "--out", "/nonexistent-dir/x.jsonl"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_file_mirrors_flags() {
    let path = scratch("job.json");
    std::fs::write(&path, r#"{"command": "hstar", "k": 2, "c": [1, 1, 1, 1], "output": "text"}"#).unwrap();
    let out = prism(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "[1, 2, 1]\n");
    std::fs::write(&path, r#"{"command": "hstar", "bogus": 1}"#).unwrap();
    assert_eq!(prism(&["run", "--config", path.to_str().unwrap()]).status.code(), Some(2));
}
