use std::path::Path;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lab")).args(args).env("LAB_THREADS", "1").output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn run_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"experiment": "sandwich-audit", "params": {"graphs": 12, "n_max": 7}, "seed": 5, "output": "out.json"}"#,
    );
    let out = lab(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let result = dir.path().join("out.json");
    assert!(result.exists());

    let summary = lab(&["report", result.to_str().unwrap()]);
    assert_eq!(summary.status.code(), Some(0));
    let text = String::from_utf8(summary.stdout).unwrap();
    assert!(text.contains("[PASS] sandwich violations") && text.trim_end().ends_with("overall: PASS"), "{text}");

    let csv = lab(&["report", result.to_str().unwrap(), "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("graph,n,edges,clique,theta_complement,chromatic"));
    assert_eq!(lines.count(), 12);

    let first = std::fs::read(&result).unwrap();
    assert_eq!(lab(&["run", &cfg]).status.code(), Some(0));
    let second: serde_json::Value = serde_json::from_slice(&std::fs::read(&result).unwrap()).unwrap();
    let first: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(first["samples"], second["samples"]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(dir.path(), r#"{"experiment": "nope", "seed": 1, "output": "x.json"}"#);
    assert_eq!(lab(&["run", &unknown]).status.code(), Some(2));

    let bad_param =
        write_config(dir.path(), r#"{"experiment": "sandwich-audit", "params": {"graphz": 3}, "seed": 1, "output": "x.json"}"#);
    assert_eq!(lab(&["run", &bad_param]).status.code(), Some(3));

    let missing_seed = write_config(dir.path(), r#"{"experiment": "sandwich-audit", "output": "x.json"}"#);
    assert_eq!(lab(&["run", &missing_seed]).status.code(), Some(3));

    let unwritable = write_config(
        dir.path(),
        r#"{"experiment": "sandwich-audit", "params": {"graphs": 2}, "seed": 1, "output": "/nonexistent-dir/x.json"}"#,
    );
    assert_eq!(lab(&["run", &unwritable]).status.code(), Some(4));

    let corrupt = dir.path().join("corrupt.json");
    std::fs::write(&corrupt, "{\"schema\": 1").unwrap();
    assert_eq!(lab(&["report", corrupt.to_str().unwrap()]).status.code(), Some(5));

    assert_eq!(lab(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn seeds_are_listed_per_label() {
    let out = lab(&["seeds", "42", "er", "circulant"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, [format!("er\t{}", numlab::rng::derive_seed(42, "er")), format!("circulant\t{}", numlab::rng::derive_seed(42, "circulant"))]);
}
