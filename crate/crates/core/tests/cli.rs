use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn conjlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conjlab"))
        .args(args)
        .output()
        .unwrap()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn malformed_config_exits_with_usage_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("bad.json");
    std::fs::write(&cfg, "{\"command\": \"duality\",").unwrap();
    let out = conjlab(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn unknown_command_and_bad_values_exit_with_usage_error() {
    assert_eq!(conjlab(&["integrate"]).status.code(), Some(2));
    assert_eq!(conjlab(&[]).status.code(), Some(2));
    assert_eq!(conjlab(&["duality", "--dim", "4"]).status.code(), Some(2));
    assert_eq!(
        conjlab(&["duality", "--profile", "t^3"]).status.code(),
        Some(2)
    );
    assert_eq!(conjlab(&["duality", "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn failed_checks_exit_with_one() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("strict.json");
    let out_dir = tmp.path().join("out");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"command": "conjugate", "tolerances": {{"halving_ratio": 100}}, "options": {{"oracle_samples": 5}}, "out": {:?}}}"#,
            out_dir
        ),
    )
    .unwrap();
    let out = conjlab(&["--config", cfg.to_str().unwrap(), "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out_dir);
    assert!(r["summary"]["failed"].as_u64().unwrap() > 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL conjugate.biconjugate"));
}

#[test]
fn flags_override_config_and_outputs_are_written() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"command": "conjugate", "seed": 1, "options": {"points": 4}}"#,
    )
    .unwrap();
    let out_dir = tmp.path().join("out");
    let out = conjlab(&[
        "duality",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "9",
        "--profile",
        "t^2",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let r = report(&out_dir);
    assert_eq!(r["command"], "duality");
    assert_eq!(r["seed"], 9);
    assert!(r["timestamp"].is_string());
    let gaps = r["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|x| x["id"].as_str().unwrap().starts_with("duality.t2.n1.gap"))
        .count();
    assert_eq!(gaps, 4);
    let csv = std::fs::read_to_string(out_dir.join("plots/duality-gaps-t2-n1.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,gap");
    assert_eq!(lines.len(), 5);
    let xs: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(xs.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let dirs = [tmp.path().join("a"), tmp.path().join("b")];
    for d in &dirs {
        let out = conjlab(&[
            "conjugate",
            "--dim",
            "1",
            "--dim",
            "2",
            "--no-timestamp",
            "--out",
            d.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let read = |d: &Path| std::fs::read(d.join("report.json")).unwrap();
    assert_eq!(read(&dirs[0]), read(&dirs[1]));
    assert!(!String::from_utf8_lossy(&read(&dirs[0])).contains("timestamp"));
}
