//! End-to-end runs of the `szego` binary.

use std::path::Path;
use std::process::{Command, Output};

fn szego(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_szego"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_remove("SZEGO_OUT_DIR")
        .output()
        .unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn invalid_family_is_a_usage_error() {
    let d = tempfile::tempdir().unwrap();
    let o = szego(d.path(), &["roots", "--family", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let o = szego(d.path(), &["roots", "--bogus-flag"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn minimal_roots_run() {
    let d = tempfile::tempdir().unwrap();
    let o = szego(d.path(), &["roots", "--n", "2"]);
    assert!(o.status.success());
    let csv = read(d.path(), "exp_n2_roots.csv");
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.starts_with("family,n,re,im,residual\n"));
}

#[test]
fn plot_sidecar_holds_the_plotted_points() {
    let d = tempfile::tempdir().unwrap();
    assert!(szego(d.path(), &["roots", "--n", "75"]).status.success());
    let side = read(d.path(), "exp_n75_roots_plot.csv");
    let svg = read(d.path(), "exp_n75_roots_plot.svg");
    let roots = side.lines().filter(|l| l.starts_with("roots,")).count();
    let curve = side.lines().filter(|l| l.starts_with("curve,")).count();
    assert_eq!(roots, 74);
    assert_eq!(svg.matches("<circle").count(), roots);
    let poly = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
    assert_eq!(poly.split("points=\"").nth(1).unwrap().split(' ').count(), curve);
}

#[test]
fn curve_rows_lie_on_the_curve() {
    let d = tempfile::tempdir().unwrap();
    assert!(szego(d.path(), &["curve", "--lambda", "1", "--m", "512"]).status.success());
    let csv = read(d.path(), "curve_lambda1.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "arg,re,im,tau,re_phi");
    let rows: Vec<f64> = lines.map(|l| l.split(',').nth(4).unwrap().parse().unwrap()).collect();
    assert_eq!(rows.len(), 512);
    assert!(rows.iter().all(|r| r.abs() <= 1e-12));
}

#[test]
fn outputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [a.path(), b.path()] {
        assert!(szego(d, &["roots", "--n", "60,90", "--seed", "7"]).status.success());
        assert!(szego(d, &["predict", "--n", "100"]).status.success());
    }
    for f in ["exp_n60_roots.csv", "exp_n90_roots_plot.svg", "exp_predictions.csv", "exp_predictions.json"] {
        assert_eq!(read(a.path(), f), read(b.path(), f), "{f}");
    }
}

#[test]
fn flags_override_config_and_env_sets_output() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("run.json");
    std::fs::write(&cfg, r#"{"family": {"name": "sin", "params": {}}, "n_list": [30], "seed": 3}"#).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_szego"))
        .args(["roots", "--config", cfg.to_str().unwrap(), "--n", "40"])
        .env("SZEGO_OUT_DIR", d.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(d.path().join("sin_n40_roots.csv").exists());
    assert!(!d.path().join("sin_n30_roots.csv").exists());
}

#[test]
fn laplace_table_covers_the_lambda_grid() {
    let d = tempfile::tempdir().unwrap();
    assert!(szego(d.path(), &["laplace", "--demo", "watson-demo"]).status.success());
    let csv = read(d.path(), "laplace_comparison.csv");
    for lam in ["20.0", "50.0", "100.0"] {
        assert!(csv.lines().any(|l| l.split(',').nth(1) == Some(lam)), "{lam}");
    }
    assert!(!csv.contains("log_power_demo"));
    assert!(read(d.path(), "laplace_series.txt").contains("λ^{-1}"));
}

#[test]
fn verify_exp_passes() {
    let d = tempfile::tempdir().unwrap();
    let o = szego(d.path(), &["verify", "--n", "50,100,200"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let checks: serde_json::Value = serde_json::from_str(&read(d.path(), "exp_checks.json")).unwrap();
    assert!(checks.as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert!(read(d.path(), "exp_rates.csv").starts_with("family,check,model,constant,exponent,r2\n"));
}

#[test]
fn numerical_failure_writes_a_record() {
    let d = tempfile::tempdir().unwrap();
    // Three roots per set cannot fill the exterior band.
    let o = szego(d.path(), &["verify", "--n", "4,5,6"]);
    assert_eq!(o.status.code(), Some(1));
    let rec: serde_json::Value = serde_json::from_str(&read(d.path(), "failure.json")).unwrap();
    assert_eq!(rec["status"], "failure");
}

#[test]
fn report_writes_summary() {
    let d = tempfile::tempdir().unwrap();
    let o = szego(d.path(), &["report", "--n", "60,120"]);
    assert!(o.status.success());
    assert!(read(d.path(), "exp_summary.md").contains("| 120 |"));
    let s: serde_json::Value = serde_json::from_str(&read(d.path(), "exp_summary.json")).unwrap();
    assert_eq!(s.as_array().unwrap().len(), 2);
}
