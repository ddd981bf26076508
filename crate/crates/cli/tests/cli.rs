use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn opineq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opineq")).args(args).output().expect("spawn opineq")
}

fn write_diag(dir: &Path, name: &str, diag: &[f64]) -> PathBuf {
    let n = diag.len();
    let mut entries = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        for j in 0..n {
            entries.push(format!("[{}, 0]", if i == j { *d } else { 0.0 }));
        }
    }
    let path = dir.join(name);
    fs::write(&path, format!("{{\"dim\": {n}, \"entries\": [{}]}}", entries.join(", "))).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn bound_log_identity_vs_three() {
    let dir = TempDir::new().unwrap();
    let a = write_diag(dir.path(), "a.json", &[1.0, 1.0]);
    let b = write_diag(dir.path(), "b.json", &[3.0, 3.0]);
    let out = dir.path().join("bound.json");
    let o = opineq(&["bound", "--f", "log", "--A", s(&a), "--B", s(&b), "--norms", "op", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&out);
    let res = &v["results"][0];
    assert!((res["lhs"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-12);
    let quasi = res["bounds"].as_array().unwrap().iter().find(|b| b["mode"] == "quasiconvex").unwrap();
    assert!((quasi["rhs"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(quasi["pass"], Value::Bool(true));
}

#[test]
fn bound_equal_inputs_margins_equal_rhs() {
    let dir = TempDir::new().unwrap();
    let a = write_diag(dir.path(), "a.json", &[0.5, 2.0, 4.0]);
    let out = dir.path().join("bound.json");
    let o = opineq(&["bound", "--f", "pow:0.5", "--A", s(&a), "--B", s(&a), "--norms", "op,tr,s:3", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    for res in read_json(&out)["results"].as_array().unwrap() {
        assert_eq!(res["lhs"].as_f64().unwrap(), 0.0);
        for b in res["bounds"].as_array().unwrap() {
            assert_eq!(b["margin"], b["rhs"]);
        }
    }
}

#[test]
fn bound_invalid_json_names_file() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("broken.json");
    fs::write(&bad, "{not json").unwrap();
    let b = write_diag(dir.path(), "b.json", &[1.0]);
    let o = opineq(&["bound", "--f", "log", "--A", s(&bad), "--B", s(&b)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("broken.json"));
}

#[test]
fn bound_domain_error_exit_three() {
    let dir = TempDir::new().unwrap();
    let a = write_diag(dir.path(), "a.json", &[-1.0, 2.0]);
    let b = write_diag(dir.path(), "b.json", &[1.0, 2.0]);
    let o = opineq(&["bound", "--f", "log", "--A", s(&a), "--B", s(&b)]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unknown_function_is_input_error() {
    let dir = TempDir::new().unwrap();
    let a = write_diag(dir.path(), "a.json", &[1.0]);
    let o = opineq(&["bound", "--f", "cosh", "--A", s(&a), "--B", s(&a)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn quadrature_identity_function_is_exact() {
    let dir = TempDir::new().unwrap();
    let a = write_diag(dir.path(), "a.json", &[1.0, 2.0]);
    let b = write_diag(dir.path(), "b.json", &[5.0, 3.0]);
    let out = dir.path().join("q.json");
    let o = opineq(&["quadrature", "--f", "pow:1", "--A", s(&a), "--B", s(&b), "--tol", "1e-10", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let v = read_json(&out);
    for rule in v["rules"].as_array().unwrap() {
        for e in rule["errors"].as_array().unwrap() {
            assert!(e["error"].as_f64().unwrap() < 1e-10);
        }
    }
    let constants: Vec<&str> = v["rules"].as_array().unwrap().iter().map(|r| r["constant"].as_str().unwrap()).collect();
    assert_eq!(constants, ["5/32", "25/288"]);
}

#[test]
fn quadrature_log_ratio_in_unit_interval() {
    let dir = TempDir::new().unwrap();
    let a = write_diag(dir.path(), "a.json", &[0.3, 1.0, 2.0]);
    let b = write_diag(dir.path(), "b.json", &[4.0, 0.7, 6.0]);
    let out = dir.path().join("q.json");
    let o = opineq(&["quadrature", "--f", "log", "--A", s(&a), "--B", s(&b), "--norms", "op,tr", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    for rule in read_json(&out)["rules"].as_array().unwrap() {
        for e in rule["errors"].as_array().unwrap() {
            let r = e["ratio"].as_f64().unwrap();
            assert!(r > 0.0 && r <= 1.0, "{r}");
        }
    }
}

#[test]
fn quadrature_equal_inputs_zero_error() {
    let dir = TempDir::new().unwrap();
    let a = write_diag(dir.path(), "a.json", &[0.3, 2.0]);
    let out = dir.path().join("q.json");
    let o = opineq(&["quadrature", "--f", "log", "--A", s(&a), "--B", s(&a), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    for rule in read_json(&out)["rules"].as_array().unwrap() {
        assert!(rule["errors"][0]["error"].as_f64().unwrap() < 1e-14);
    }
}

#[test]
fn verify_zero_samples_is_config_error() {
    let o = opineq(&["verify", "--samples", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_bad_config_file() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"dims": [2], "sample": 3}"#).unwrap();
    let o = opineq(&["verify", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_flags_override_config() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"dims": [3], "samples": 0, "functions": ["log"], "norms": ["op"]}"#).unwrap();
    let out = dir.path().join("r.json");
    let o = opineq(&["verify", "--config", s(&cfg), "--samples", "1", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let reports = read_json(&out);
    let reports = reports.as_array().unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r["witness"]["dim"] == 3));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("unexpected-fail=0"), "{stdout}");
}

#[test]
fn verify_counterexample_reported_as_expected_fail() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let o = opineq(&[
        "verify", "--dims", "2", "--samples", "2", "--functions", "log,square_minus_one", "--norms", "op,tr", "--out", s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let reports = read_json(&out);
    let expected: Vec<&Value> = reports.as_array().unwrap().iter().filter(|r| r["expected_fail"] == true).collect();
    assert_eq!(expected.len(), 1);
    assert_eq!(expected[0]["lhs"], 1.0);
    assert_eq!(expected[0]["rhs"], 0.0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("expected-fail=1"));
}
