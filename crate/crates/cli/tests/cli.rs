use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_anosov-tangent"))
}

fn example_config() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/example.config.json")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn example_config_matches_default_perturbation() {
    let text = std::fs::read_to_string(example_config()).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let f: anosov_core::torus::TrigPoly = serde_json::from_value(v["coeffs"].clone()).unwrap();
    assert_eq!(f, anosov_core::acceptance::default_perturbation());
}

#[test]
fn slope_report_on_example_config() {
    let cfg = example_config();
    let o = run(&["slope", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["K"], 3);
    assert_eq!(v["per_order"].as_array().unwrap().len(), 3);
    assert_eq!(v["restrict_mode"], "stem-minus-only");
    assert_eq!(v["forced"], true);
    assert!(v["abs_err"].as_f64().unwrap() < 1e-5);
    for key in ["psi", "eps", "pmax", "slope", "tangent", "oracle_slope"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn outputs_are_deterministic() {
    let cfg = example_config();
    let args = ["slope-field", "--config", cfg.to_str().unwrap(), "--grid", "3,2", "--K", "2", "--pmax", "20"];
    let a = run(&args);
    let b = bin().args(args).env("ANOSOV_THREADS", "1").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 7);
    assert!(text.starts_with("theta1,theta2,eps,slope,"));
}

#[test]
fn trees_k4() {
    let o = run(&["trees", "--k", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,shapes,sign_trees,derivative_keys,product_trees"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[..4], ["4", "5", "40", "160"]);
}

#[test]
fn radius_guard_exit_code() {
    let o = run(&["slope", "--eps", "0.02"]);
    assert_eq!(o.status.code(), Some(3));
    let diag: Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(diag["error"], "RadiusExceeded");
}

#[test]
fn validation_exit_code() {
    let o = run(&["slope", "--matrix", "1,0,0,1", "--force"]);
    assert_eq!(o.status.code(), Some(2));
    let diag: Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(diag["error"], "NotHyperbolic");
    let o = run(&["slope", "--K", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn other_subcommands_run() {
    let cfg = example_config();
    let c = cfg.to_str().unwrap();
    let h: Value = serde_json::from_str(&stdout(&run(&["h-expansion", "--config", c]))).unwrap();
    assert_eq!(h["terms"].as_array().unwrap().len(), 3);
    let q = stdout(&run(&["qnt", "--config", c, "--K", "2"]));
    assert_eq!(q.lines().count(), 1 + 2 * 3);
    let b: Value = serde_json::from_str(&stdout(&run(&["bound", "--config", c]))).unwrap();
    assert_eq!(b["degree_bound"], 2);
    let o: Value = serde_json::from_str(&stdout(&run(&["oracle", "--config", c, "--eps", "0,0.02"]))).unwrap();
    assert_eq!(o.as_array().unwrap().len(), 2);
    assert!(o[0]["slope_oracle"].as_f64().unwrap().abs() < 1e-14);
}

#[test]
fn verify_passes_on_zero_perturbation() {
    let dir = std::env::temp_dir().join(format!("anosov-verify-{}", std::process::id()));
    let o = run(&["verify", "--coeffs", "[]", "--out-dir", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("verify.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["criteria"].as_array().unwrap().len(), 10);
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn verify_reports_failure_on_default_instance() {
    let o = run(&["verify"]);
    // the finite-t criterion does not hold at second order
    assert_eq!(o.status.code(), Some(3));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let failed: Vec<u64> = report["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["id"].as_u64().unwrap())
        .collect();
    assert_eq!(failed, [7]);
    assert_eq!(report["passing_restrict_modes"][0], "stem-minus-only");
}
