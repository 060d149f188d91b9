use serde_json::Value;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workdir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("pmc-cli-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(cmd: &str, dir: &Path, config: &str) -> Output {
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_pmc"))
        .args([cmd, "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir)
        .output()
        .unwrap()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn check_passes(rep: &Value, name: &str) -> bool {
    rep["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))["pass"]
        .as_bool()
        .unwrap()
}

#[test]
fn moments_of_the_rotating_drop() {
    let dir = workdir("moments");
    let out = run(
        "moments",
        &dir,
        r#"{"F": "rotating_drop(-1)", "K": 3, "r": 0.05, "grid_points": 17,
            "outputs": {"report_path": "report.json", "csv_path": "grid.csv"}}"#,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = report(&dir);
    assert!((rep["results"]["s0"].as_f64().unwrap() + 2.0).abs() < 1e-8);
    assert!((rep["results"]["dsum"].as_f64().unwrap().abs() - 8.0 * PI).abs() < 1e-6);
    let csv = std::fs::read_to_string(dir.join("grid.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("s,total,mu_1,mu_2,mu_3"));
    assert_eq!(lines.count(), 17);
}

#[test]
fn constant_forcing_has_no_balanced_center() {
    let dir = workdir("noroot");
    let out = run("moments", &dir, r#"{"F": "1", "K": 2, "r": 0.1, "outputs": {"report_path": "report.json"}}"#);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no balanced center in bracket"));
}

#[test]
fn balance_solves_and_echoes_the_config() {
    let dir = workdir("balance");
    let text = r#"{"F": "rotating_drop(1)", "K": 3, "r": 0.05, "outputs": {"report_path": "report.json"}}"#;
    let out = run("balance", &dir, text);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = report(&dir);
    assert_eq!(rep["config"], serde_json::from_str::<Value>(text).unwrap());
    assert_eq!(rep["results"]["feasible"], true);
    let eps = floats(&rep["results"]["eps"]);
    assert!(((eps[0] - eps[1]) / eps[0]).abs() < 1e-4, "{eps:?}");
    assert!(check_passes(&rep, "residual_norm"));
}

#[test]
fn balance_reports_infeasible_signs() {
    let dir = workdir("infeasible");
    let out = run("balance", &dir, r#"{"F": "rotating_drop(-1)", "K": 3, "r": 0.05, "outputs": {"report_path": "report.json"}}"#);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("partial moment sums"));
    let rep = report(&dir);
    assert_eq!(rep["results"]["feasible"], false);
    assert_eq!(rep["results"]["partial_sum_signs"], serde_json::json!(["+", "+", "0"]));
}

#[test]
fn assemble_single_sphere() {
    let dir = workdir("sphere");
    let out = run(
        "assemble",
        &dir,
        r#"{"F": "0", "K": 1, "r": 0.1, "resolution": {"n_profile": 64, "n_angle": 32},
            "outputs": {"report_path": "report.json", "mesh_path": "sphere.obj"}}"#,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let obj = std::fs::read_to_string(dir.join("sphere.obj")).unwrap();
    let mut n = 0;
    for line in obj.lines().filter(|l| l.starts_with("v ")) {
        let v: Vec<f64> = line[2..].split_whitespace().map(|x| x.parse().unwrap()).collect();
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        assert!((r - 1.0).abs() < 1e-10, "{r}");
        n += 1;
    }
    assert!(n > 0);
    assert!(check_passes(&report(&dir), "euler_characteristic"));
}

#[test]
fn assemble_balanced_chain() {
    let dir = workdir("chain");
    let out = run(
        "assemble",
        &dir,
        r#"{"F": "rotating_drop(1)", "K": 3, "r": 0.1,
            "outputs": {"report_path": "report.json", "csv_path": "regions.csv"}}"#,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = report(&dir);
    assert_eq!(rep["results"]["euler_characteristic"], 2);
    assert!(check_passes(&rep, "waist_radius_relative_error"));
    let csv = std::fs::read_to_string(dir.join("regions.csv")).unwrap();
    let labels: std::collections::BTreeSet<&str> =
        csv.lines().skip(1).map(|l| l.split(',').nth(4).unwrap()).collect();
    assert_eq!(labels.iter().filter(|l| l.starts_with("sphere")).count(), 3);
    assert_eq!(labels.iter().filter(|l| l.starts_with("neck")).count(), 2);
    assert!(dir.join("surface.obj").exists());
}

#[test]
fn assemble_rejects_wide_necks() {
    let dir = workdir("tight");
    let out = run(
        "assemble",
        &dir,
        r#"{"F": "0", "K": 2, "r": 0.1, "params": {"s": 0.0, "sigma": [0.5], "delta": [0.0]},
            "outputs": {"report_path": "report.json"}}"#,
    );
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn validate_records_slopes_and_kernel_counts() {
    let dir = workdir("validate");
    let out = run("validate", &dir, r#"{"F": "rotating_drop(1)", "K": 2, "r": 0.1, "outputs": {"report_path": "report.json"}}"#);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = report(&dir);
    assert!(check_passes(&rep, "projected_sup_slope"));
    assert!(check_passes(&rep, "projected_zero_forcing_sup_f"));
    let names: Vec<&str> = rep["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"defect_sphere_slope"));
    assert!(names.contains(&"kernel_count_eps_1e-3"));
    assert!(rep["results"]["kernel"][0]["kernel_count"].is_u64());
}

#[test]
fn reports_are_reproducible_and_sorted() {
    let dir = workdir("repeat");
    let text = r#"{"F": "rotating_drop(-1)", "K": 2, "r": 0.1, "outputs": {"report_path": "report.json"}}"#;
    run("moments", &dir, text);
    let a = std::fs::read(dir.join("report.json")).unwrap();
    run("moments", &dir, text);
    let b = std::fs::read(dir.join("report.json")).unwrap();
    assert_eq!(a, b);
    let s = String::from_utf8(a).unwrap();
    let at = |k: &str| s.find(&format!("\n  \"{k}\"")).unwrap();
    assert!(at("checks") < at("config") && at("config") < at("results"));
}

#[test]
fn config_errors_exit_with_one() {
    let dir = workdir("config");
    for bad in [
        r#"{"F": "0", "K": 1, "r": 0.1, "outputs": {"report_path": "x.json"}, "typo": 1}"#,
        r#"{"F": "0", "K": 1, "r": 0.1, "nu": 2.5, "outputs": {"report_path": "x.json"}}"#,
        r#"{"F": "0", "K": 1, "r": 0.7, "outputs": {"report_path": "x.json"}}"#,
        r#"{"F": "p0 +", "K": 1, "r": 0.1, "outputs": {"report_path": "x.json"}}"#,
        r#"{"F": "0", "K": 0, "r": 0.1, "outputs": {"report_path": "x.json"}}"#,
    ] {
        let out = run("moments", &dir, bad);
        assert_eq!(out.status.code(), Some(1), "{bad}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_pmc")).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
