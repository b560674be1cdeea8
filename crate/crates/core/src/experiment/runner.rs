//! Experiment execution: one config in, one JSON report (plus a CSV trace for
//! schedule-driven experiments) out.

use std::path::{Path, PathBuf};

use serde_json::json;

use crate::error::Result;
use crate::experiment::config::{ExperimentConfig, ExperimentKind, LoadedConfig, MethodOverride};
use crate::experiment::report::{unix_timestamp, write_trace_csv, CriterionResult, Report};
use crate::experiment::suite::algebra_suite;
use crate::integrate::{Method, TolerancePolicy};
use crate::measures::{adjoint_check, CoForm};
use crate::surface::{boundary_pairing, stokes_check, surface_measure, TraceRow};

/// Everything one run produces before any file is written.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: Report,
    pub trace: Option<Vec<TraceRow>>,
}

/// Output artifact locations of a completed run.
#[derive(Clone, Debug)]
pub struct RunPaths {
    pub report: PathBuf,
    pub trace: Option<PathBuf>,
}

fn method_name(method: &Method) -> &'static str {
    match method {
        Method::Quadrature { .. } => "quadrature",
        Method::Mc { .. } => "mc",
    }
}

/// Default absolute tolerance for headline comparisons: tight for quadrature,
/// noise-scaled (with the documented floor) for Monte Carlo.
fn headline_tolerance(
    config: &ExperimentConfig,
    method: &Method,
    quad_default: f64,
    mc_floor: f64,
    stderr: f64,
) -> f64 {
    match method {
        Method::Quadrature { .. } => config.tolerance.unwrap_or(quad_default),
        Method::Mc { .. } => config
            .tolerance
            .unwrap_or_else(|| mc_floor.max(3.0 * stderr)),
    }
}

/// Executes an experiment, producing the report and optional trace in memory.
pub fn execute(
    config: &ExperimentConfig,
    digest: &str,
    seed_override: Option<u64>,
    method_override: Option<MethodOverride>,
) -> Result<RunOutcome> {
    config.validate()?;
    let method = config.resolve_method(seed_override, method_override);
    let seed = seed_override.unwrap_or_else(|| config.master_seed());
    let mu = config.measure.build(config.dim)?;

    let (results, criteria, trace): (serde_json::Value, Vec<CriterionResult>, Option<Vec<TraceRow>>) =
        match config.experiment {
            ExperimentKind::AlgebraCheck => {
                let triples = config.triples.unwrap_or(1000);
                let suite = algebra_suite(seed, triples);
                let tol = config.tolerance.unwrap_or(1e-12);
                let criteria = vec![
                    CriterionResult::gap("adjunction-max-gap", suite.max_adjunction_gap, tol),
                    CriterionResult::gap(
                        "wedge-bound-violations",
                        suite.wedge_bound_violations as f64,
                        0.0,
                    ),
                    CriterionResult::gap(
                        "contraction-bound-violations",
                        suite.contraction_bound_violations as f64,
                        0.0,
                    ),
                ];
                (serde_json::to_value(&suite)?, criteria, None)
            }
            ExperimentKind::AdjointCheck => {
                let g_degree = config.forms.get("g").map_or(0, |f| f.degree());
                let g = config.form("g", g_degree)?;
                let f = config.form("f", g.degree() + 1)?;
                let policy = TolerancePolicy {
                    quadrature_abs: config.tolerance.unwrap_or(1e-10),
                    mc_z: 3.0,
                };
                let adj = adjoint_check(g, f, &mu, &method, &policy)?;
                let stderr =
                    (adj.lhs.stderr * adj.lhs.stderr + adj.rhs.stderr * adj.rhs.stderr).sqrt();
                let criteria =
                    vec![CriterionResult::gap("adjoint-gap", adj.gap, adj.tolerance)];
                let results = json!({
                    "lhs": adj.lhs.value,
                    "rhs": adj.rhs.value,
                    "gap": adj.gap,
                    "stderr": stderr,
                    "tolerance": adj.tolerance,
                    "pass": adj.pass,
                });
                (results, criteria, None)
            }
            ExperimentKind::LayerConverge => {
                let domain = config.domain.as_ref().expect("validated");
                let schedule = config.schedule();
                let s = surface_measure(domain, None, &mu, &schedule, &method)?;
                let mut criteria = Vec::new();
                match config.expected {
                    Some(expected) => {
                        let tol = headline_tolerance(
                            config,
                            &method,
                            5e-5,
                            1e-3,
                            s.value.stderr,
                        );
                        criteria.push(CriterionResult::gap(
                            "limit-vs-expected",
                            s.value.value - expected,
                            tol,
                        ));
                    }
                    None => criteria.push(CriterionResult {
                        name: "estimate-finite".into(),
                        value: s.value.value,
                        tolerance: f64::INFINITY,
                        pass: s.value.value.is_finite(),
                    }),
                }
                let results = json!({
                    "estimate": s.value,
                    "trace": s.trace,
                });
                (results, criteria, Some(s.trace))
            }
            ExperimentKind::BoundaryPairing => {
                let domain = config.domain.as_ref().expect("validated");
                let g = config.form("g", 1)?;
                let schedule = config.schedule();
                let report = boundary_pairing(domain, &mu, g, &schedule, &method)?;
                let policy = TolerancePolicy {
                    quadrature_abs: config.tolerance.unwrap_or(1e-6),
                    mc_z: 3.0,
                };
                let gap_tol = policy.gap_tolerance(&method, &report.lhs, &report.rhs);
                let mut criteria =
                    vec![CriterionResult::gap("pairing-gap", report.gap, gap_tol)];
                if let Some(expected) = config.expected {
                    let tol = headline_tolerance(
                        config,
                        &method,
                        1e-6,
                        1e-3,
                        report.lhs.stderr,
                    );
                    criteria.push(CriterionResult::gap(
                        "lhs-vs-expected",
                        report.lhs.value - expected,
                        tol,
                    ));
                }
                let trace = report.lhs_trace.clone();
                (serde_json::to_value(&report)?, criteria, Some(trace))
            }
            ExperimentKind::StokesCheck => {
                let domain = config.domain.as_ref().expect("validated");
                let omega_field = config.form("omega", 1)?;
                let omega = CoForm::new(mu.clone(), omega_field.clone())?;
                let schedule = config.schedule();
                let policy = TolerancePolicy::default();
                let report = stokes_check(&omega, domain, &schedule, &method, &policy)?;
                let gap_policy = TolerancePolicy {
                    quadrature_abs: config.tolerance.unwrap_or(1e-6),
                    mc_z: 3.0,
                };
                let gap_tol = gap_policy.gap_tolerance(&method, &report.boundary, &report.volume);
                let sharp_tol =
                    gap_policy.gap_tolerance(&method, &report.volume, &report.volume_sharp);
                let max_identity = report
                    .identity
                    .iter()
                    .fold(0.0f64, |m, row| m.max(row.value.abs()));
                let max_identity_tol = report
                    .identity
                    .iter()
                    .fold(0.0f64, |m, row| m.max(row.tolerance));
                let mut criteria = vec![
                    CriterionResult::gap("stokes-gap", report.gap, gap_tol),
                    CriterionResult::gap("sharp-volume-gap", report.sharp_gap, sharp_tol),
                    CriterionResult {
                        name: "proof-identity".into(),
                        value: max_identity,
                        tolerance: max_identity_tol,
                        pass: report.identity_pass,
                    },
                ];
                if let Some(expected) = config.expected {
                    let tol_b = headline_tolerance(
                        config,
                        &method,
                        1e-6,
                        1e-3,
                        report.boundary.stderr,
                    );
                    criteria.push(CriterionResult::gap(
                        "boundary-vs-expected",
                        report.boundary.value - expected,
                        tol_b,
                    ));
                    let tol_v = headline_tolerance(
                        config,
                        &method,
                        1e-6,
                        1e-3,
                        report.volume.stderr,
                    );
                    criteria.push(CriterionResult::gap(
                        "volume-vs-expected",
                        report.volume.value - expected,
                        tol_v,
                    ));
                }
                let trace = report.boundary_trace.clone();
                (serde_json::to_value(&report)?, criteria, Some(trace))
            }
        };

    let pass = criteria.iter().all(|c| c.pass);
    let report = Report {
        experiment: config.experiment.as_str().to_string(),
        inputs_digest: digest.to_string(),
        method: method_name(&method).to_string(),
        seed,
        results,
        criteria,
        pass,
        timestamp: unix_timestamp(),
    };
    Ok(RunOutcome { report, trace })
}

/// Executes an experiment and writes its artifacts under `out_dir`.
pub fn run_to_files(
    loaded: &LoadedConfig,
    out_dir: &Path,
    seed_override: Option<u64>,
    method_override: Option<MethodOverride>,
) -> Result<(RunOutcome, RunPaths)> {
    let outcome = execute(&loaded.config, &loaded.digest, seed_override, method_override)?;
    std::fs::create_dir_all(out_dir)?;
    let report_path = out_dir.join(&loaded.config.output.report);
    outcome.report.write(&report_path)?;
    let trace_path = match &outcome.trace {
        Some(rows) => {
            let p = out_dir.join(&loaded.config.output.trace);
            write_trace_csv(rows, &p)?;
            Some(p)
        }
        None => None,
    };
    Ok((
        outcome,
        RunPaths {
            report: report_path,
            trace: trace_path,
        },
    ))
}

/// Renders a short human summary for standard output.
pub fn summarize(outcome: &RunOutcome, paths: &RunPaths) -> String {
    let mut out = String::new();
    let r = &outcome.report;
    out.push_str(&format!(
        "experiment {} [{}, seed {}]: {}\n",
        r.experiment,
        r.method,
        r.seed,
        if r.pass { "PASS" } else { "FAIL" }
    ));
    for c in &r.criteria {
        out.push_str(&format!(
            "  [{}] {}: value {:.6e}, tolerance {:.6e}\n",
            if c.pass { "pass" } else { "FAIL" },
            c.name,
            c.value,
            c.tolerance
        ));
    }
    out.push_str(&format!("  report: {}\n", paths.report.display()));
    if let Some(t) = &paths.trace {
        out.push_str(&format!("  trace:  {}\n", t.display()));
    }
    out
}
