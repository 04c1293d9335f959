use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_delta-shells"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn onedim_sweep_writes_csv_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "p.json", r#"{"kind": "onedim", "alpha_plus": [-1, 0], "alpha_minus": [-3, 0]}"#);
    let out = dir.path().join("sweep.csv");
    let o = run(&["sweep", "--spec", spec.to_str().unwrap(), "--eps", "1e-2,5e-3,2.5e-3,1.25e-3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("PASS sweep"));
    let csv = std::fs::read_to_string(out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "epsilon,lambda_re,lambda_im,kappa_re,kappa_im,residual,solver");
    assert_eq!(lines.len(), 5);
    let eps: Vec<f64> = lines[1..].iter().map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(eps.windows(2).all(|w| w[0] > w[1]));
    assert!(lines[1].ends_with(",onedim"));
}

#[test]
fn json_output_is_inferred_from_extension() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "p.json", r#"{"kind": "onedim", "alpha_plus": [-1, 0], "alpha_minus": [-1, 0]}"#);
    let out = dir.path().join("report.json");
    let o = run(&["sweep", "--spec", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    let slope = v["fitted"]["coefficients"][1][0].as_f64().unwrap();
    assert!((slope - 2.0).abs() < 1e-3);
    assert_eq!(v["pass"]["slope"], serde_json::Value::Bool(true));
}

#[test]
fn tight_slope_tolerance_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "p.json", r#"{"kind": "onedim", "alpha_plus": [-1, 0], "alpha_minus": [-3, 0]}"#);
    let o = run(&["sweep", "--spec", spec.to_str().unwrap(), "--tol-slope", "1e-12"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FAIL sweep"));
}

#[test]
fn radial_limit_and_shifted_solutions() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "r.json", r#"{"kind": "radial", "alpha_plus": [-3, 0], "alpha_minus": [-2, 0], "d": 2, "R": 1.0}"#);
    let o = run(&["radial", "--spec", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let kappa = v["kappa"][0].as_f64().unwrap();
    assert!((kappa - 2.56086134403392738).abs() < 1e-10);

    let spec = write(dir.path(), "re.json", r#"{"kind": "radial", "alpha_plus": [-3, 0], "alpha_minus": [-2, 0], "epsilon": 0.01}"#);
    let o = run(&["radial", "--spec", spec.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let kappa: f64 = row[3].parse().unwrap();
    assert!((kappa - 2.504808825790054).abs() < 1e-10);
}

#[test]
fn curve_solution_on_circle_matches_radial() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "c.json",
        r#"{"kind": "curve", "alpha_plus": [-3, 0], "alpha_minus": [-2, 0], "geometry": {"kind": "circle", "R": 1.0}}"#,
    );
    let o = run(&["curve", "--spec", spec.to_str().unwrap(), "--nodes", "64"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["kappa"][0].as_f64().unwrap() - 2.56086134403392738).abs() < 1e-10);
    assert_eq!(v["bundle"]["psi0"].as_array().unwrap().len(), 64);
}

#[test]
fn crosscheck_reports_discrepancy() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "r.json", r#"{"kind": "radial", "alpha_plus": [-2.5, 0], "alpha_minus": [-2.5, 0]}"#);
    let o = run(&["crosscheck", "--spec", spec.to_str().unwrap(), "--nodes", "64", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["max_discrepancy"].as_f64().unwrap() < 1e-6);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn uniform_and_asymptotics_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "o.json", r#"{"kind": "onedim", "alpha_plus": [-1, 0.5], "alpha_minus": [-2, 0]}"#);
    let o = run(&["uniform", "--spec", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("PASS uniform"));

    let o = run(&["onedim", "--spec", spec.to_str().unwrap()]);
    let limit: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let input = serde_json::json!({
        "alpha_plus": [-1.0, 0.5],
        "alpha_minus": [-2.0, 0.0],
        "bundles": [limit["bundle"].clone()],
    });
    let bundles = write(dir.path(), "b.json", &input.to_string());
    let o = run(&["asymptotics", "--spec", bundles.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // −(α₊+α₋)α₊α₋ = 5.5 − 4i
    assert!((v["slopes"][0][0].as_f64().unwrap() - 5.5).abs() < 1e-12);
    assert!((v["slopes"][0][1].as_f64().unwrap() + 4.0).abs() < 1e-12);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(run(&["sweep", "--spec", missing.to_str().unwrap()]).status.code(), Some(2));

    let bad = write(dir.path(), "bad.json", r#"{"kind": "onedim", "alpha_plus": [-1, 0], "alpha_minus": [-1, 0], "extra": 1}"#);
    let o = run(&["onedim", "--spec", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("extra"));

    let radial = write(dir.path(), "r.json", r#"{"kind": "radial", "alpha_plus": [-3, 0], "alpha_minus": [-2, 0]}"#);
    assert_eq!(run(&["onedim", "--spec", radial.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--spec", radial.to_str().unwrap(), "--eps", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
