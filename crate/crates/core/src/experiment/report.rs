//! Report artifacts: a JSON report with per-criterion outcomes and a CSV
//! convergence trace. Reports are byte-reproducible for a fixed config and
//! seed, except for the timestamp, which is isolated to its own key.

use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::surface::TraceRow;

/// One named pass/fail criterion with the measured value and its tolerance.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CriterionResult {
    pub fn gap(name: &str, value: f64, tolerance: f64) -> Self {
        CriterionResult {
            name: name.to_string(),
            value,
            tolerance,
            pass: value.abs() <= tolerance,
        }
    }
}

/// The JSON report the runner writes.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub experiment: String,
    /// SHA-256 of the raw config bytes.
    pub inputs_digest: String,
    pub method: String,
    pub seed: u64,
    /// Experiment-specific payload (estimates, traces, sub-reports).
    pub results: Value,
    pub criteria: Vec<CriterionResult>,
    pub pass: bool,
    /// Unix seconds at write time; the only non-reproducible field.
    pub timestamp: u64,
}

impl Report {
    /// The report as a JSON value with the timestamp removed — the
    /// reproducible part.
    pub fn reproducible_value(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut()
            .expect("report is an object")
            .remove("timestamp");
        v
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text).map_err(Error::from)
    }
}

pub fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Renders a convergence trace as CSV with the fixed header
/// `epsilon,estimate,stderr,extrapolated`.
pub fn trace_to_csv(rows: &[TraceRow]) -> String {
    let mut out = String::from("epsilon,estimate,stderr,extrapolated\n");
    for row in rows {
        let extrap = row
            .extrapolated
            .map(|v| v.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.epsilon, row.estimate, row.stderr, extrap
        ));
    }
    out
}

pub fn write_trace_csv(rows: &[TraceRow], path: &Path) -> Result<()> {
    std::fs::write(path, trace_to_csv(rows)).map_err(Error::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_rows() -> Vec<TraceRow> {
        vec![
            TraceRow {
                epsilon: 0.2,
                estimate: 0.5,
                stderr: 0.0,
                extrapolated: None,
                extrapolated_stderr: None,
            },
            TraceRow {
                epsilon: 0.1,
                estimate: 0.25,
                stderr: 0.001,
                extrapolated: Some(0.166666),
                extrapolated_stderr: Some(0.002),
            },
        ]
    }

    #[test]
    fn csv_header_and_shape() {
        let csv = trace_to_csv(&sample_rows());
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("epsilon,estimate,stderr,extrapolated"));
        assert_eq!(lines.next(), Some("0.2,0.5,0,"));
        assert_eq!(lines.next(), Some("0.1,0.25,0.001,0.166666"));
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn reproducible_value_strips_only_timestamp() {
        let report = Report {
            experiment: "stokes-check".into(),
            inputs_digest: "ab".into(),
            method: "quadrature".into(),
            seed: 42,
            results: serde_json::json!({"gap": 0.0}),
            criteria: vec![CriterionResult::gap("gap", 0.0, 1e-6)],
            pass: true,
            timestamp: 123,
        };
        let v = report.reproducible_value();
        assert!(v.get("timestamp").is_none());
        assert_eq!(v["experiment"], "stokes-check");
        assert_eq!(v["criteria"][0]["pass"], true);
    }

    #[test]
    fn criterion_pass_logic() {
        assert!(CriterionResult::gap("g", 1e-7, 1e-6).pass);
        assert!(!CriterionResult::gap("g", -2e-6, 1e-6).pass);
    }
}
