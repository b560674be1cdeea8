//! End-to-end tests of the `formcalc` binary: exit codes, artifact formats,
//! and CLI overrides, exercised through the shipped example configs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn repo_config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_formcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_config(path: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "--config",
        path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    run(&args)
}

fn report_json(out: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(out.join("report.json")).expect("report exists");
    serde_json::from_str(&text).expect("report parses")
}

#[test]
fn passing_config_exits_zero_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_config(&repo_config("stokes-halfspace.json"), dir.path(), &[]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");

    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("PASS"), "summary should say PASS: {stdout}");

    let report = report_json(dir.path());
    assert_eq!(report["experiment"], "stokes-check");
    assert_eq!(report["method"], "quadrature");
    assert_eq!(report["pass"], true);

    let csv = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert_eq!(
        csv.lines().next(),
        Some("epsilon,estimate,stderr,extrapolated"),
        "trace header must match exactly"
    );
}

#[test]
fn every_shipped_config_passes() {
    for name in [
        "algebra-check.json",
        "adjoint-check.json",
        "layer-converge.json",
        "boundary-pairing.json",
        "stokes-halfspace.json",
        "stokes-ball-mc.json",
    ] {
        let dir = tempfile::tempdir().unwrap();
        let output = run_config(&repo_config(name), dir.path(), &[]);
        assert_eq!(
            output.status.code(),
            Some(0),
            "{name} should pass: {}",
            String::from_utf8_lossy(&output.stdout)
        );
    }
}

#[test]
fn criterion_failure_exits_one() {
    // A layer estimate can never be anywhere near 10, so the headline criterion fails.
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad-expected.json");
    std::fs::write(
        &config,
        r#"{
            "experiment": "layer-converge",
            "dim": 2,
            "measure": {"kind": "gaussian_product", "dim": 2, "variances": [1.0, 1.0]},
            "domain": {"kind": "halfspace", "axis": [1.0, 0.0], "offset": 0.0},
            "expected": 10.0
        }"#,
    )
    .unwrap();
    let output = run_config(&config, dir.path(), &[]);
    assert_eq!(output.status.code(), Some(1), "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("FAIL"), "summary should say FAIL: {stdout}");
    // The report is still written so the failure can be inspected.
    assert_eq!(report_json(dir.path())["pass"], false);
}

#[test]
fn bad_fixture_exits_two_and_names_it() {
    // omega declares degree 2 where the experiment needs a 1-form.
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad-omega.json");
    std::fs::write(
        &config,
        r#"{
            "experiment": "stokes-check",
            "dim": 2,
            "measure": {"kind": "gaussian_product", "dim": 2, "variances": [1.0, 1.0]},
            "domain": {"kind": "halfspace", "axis": [1.0, 0.0], "offset": 0.0},
            "forms": {
                "omega": {"degree": 2, "dim": 2, "coeffs": [
                    {"idx": [1, 2], "expr": {"kind": "const", "value": 1.0}}
                ]}
            }
        }"#,
    )
    .unwrap();
    let output = run_config(&config, dir.path(), &[]);
    assert_eq!(output.status.code(), Some(2), "{output:?}");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains("omega"),
        "diagnostic should name the fixture: {stderr}"
    );
}

#[test]
fn malformed_json_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("broken.json");
    std::fs::write(&config, "{ not json").unwrap();
    let output = run_config(&config, dir.path(), &[]);
    assert_eq!(output.status.code(), Some(2), "{output:?}");
    assert!(!output.stderr.is_empty());
}

#[test]
fn missing_config_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_config(&dir.path().join("nope.json"), dir.path(), &[]);
    assert_eq!(output.status.code(), Some(2), "{output:?}");
}

#[test]
fn seed_and_method_overrides_land_in_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_config(
        &repo_config("layer-converge.json"),
        dir.path(),
        &["--seed", "3", "--method", "mc"],
    );
    assert_eq!(
        output.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&output.stdout)
    );
    let report = report_json(dir.path());
    assert_eq!(report["seed"], 3);
    assert_eq!(report["method"], "mc");
}

#[test]
fn quadrature_override_without_a_quadrature_path_exits_two() {
    // The ball domain only integrates by Monte Carlo; forcing quadrature is a
    // usage error, reported before any artifact is written.
    let dir = tempfile::tempdir().unwrap();
    let output = run_config(
        &repo_config("stokes-ball-mc.json"),
        dir.path(),
        &["--method", "quadrature"],
    );
    assert_eq!(output.status.code(), Some(2), "{output:?}");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains("quadrature unsupported"),
        "diagnostic should explain the method problem: {stderr}"
    );
    assert!(!dir.path().join("report.json").exists());
}
