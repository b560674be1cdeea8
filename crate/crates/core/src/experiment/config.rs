//! Experiment configuration: JSON schema, loading, and validation.
//!
//! Validation happens before any computation starts, and its diagnostics name
//! the offending field or fixture so a bad config fails fast with a useful
//! message (and exit code 2 at the CLI).

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::forms::FormField;
use crate::integrate::{Method, DEFAULT_MC_SAMPLES, DEFAULT_MC_SEED};
use crate::measures::GaussianProduct;
use crate::surface::Domain;

/// The experiment families the runner can execute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    AlgebraCheck,
    AdjointCheck,
    LayerConverge,
    BoundaryPairing,
    StokesCheck,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::AlgebraCheck => "algebra-check",
            ExperimentKind::AdjointCheck => "adjoint-check",
            ExperimentKind::LayerConverge => "layer-converge",
            ExperimentKind::BoundaryPairing => "boundary-pairing",
            ExperimentKind::StokesCheck => "stokes-check",
        }
    }
}

/// Measure description: `{"kind": "gaussian_product", "dim": D, "variances": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureSpec {
    GaussianProduct { dim: usize, variances: Vec<f64> },
}

impl MeasureSpec {
    pub fn build(&self, config_dim: usize) -> Result<GaussianProduct> {
        match self {
            MeasureSpec::GaussianProduct { dim, variances } => {
                if *dim != config_dim {
                    return Err(Error::Config(format!(
                        "measure: dim {dim} disagrees with config dim {config_dim}"
                    )));
                }
                if variances.len() != *dim {
                    return Err(Error::Config(format!(
                        "measure: {} variances for dim {dim}",
                        variances.len()
                    )));
                }
                GaussianProduct::new(variances.clone())
                    .map_err(|e| Error::Config(format!("measure: {e}")))
            }
        }
    }
}

/// Output file names, relative to the `--out` directory.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_report_name")]
    pub report: String,
    #[serde(default = "default_trace_name")]
    pub trace: String,
}

fn default_report_name() -> String {
    "report.json".into()
}

fn default_trace_name() -> String {
    "trace.csv".into()
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            report: default_report_name(),
            trace: default_trace_name(),
        }
    }
}

fn default_integration() -> Method {
    Method::quadrature()
}

/// A full experiment description.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub dim: usize,
    pub measure: MeasureSpec,
    #[serde(default)]
    pub domain: Option<Domain>,
    /// Form fixtures by role name ("f", "g", "omega", ...).
    #[serde(default)]
    pub forms: BTreeMap<String, FormField>,
    #[serde(default = "default_integration")]
    pub integration: Method,
    #[serde(default)]
    pub epsilon_schedule: Option<Vec<f64>>,
    /// Master seed; overrides the integration seed when present.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Optional reference value for the experiment's headline estimate.
    #[serde(default)]
    pub expected: Option<f64>,
    /// Optional absolute tolerance override for the experiment's criteria.
    #[serde(default)]
    pub tolerance: Option<f64>,
    /// Triple count for the algebra suite.
    #[serde(default)]
    pub triples: Option<usize>,
    #[serde(default)]
    pub output: OutputSpec,
}

/// A parsed config together with the SHA-256 digest of its source bytes.
#[derive(Clone, Debug)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub digest: String,
}

impl ExperimentConfig {
    /// Parses and validates a config from raw JSON bytes.
    pub fn from_bytes(bytes: &[u8]) -> Result<LoadedConfig> {
        let config: ExperimentConfig = serde_json::from_slice(bytes)
            .map_err(|e| Error::Config(format!("parse error: {e}")))?;
        config.validate()?;
        let digest = format!("{:x}", Sha256::digest(bytes));
        Ok(LoadedConfig { config, digest })
    }

    pub fn load(path: &Path) -> Result<LoadedConfig> {
        let bytes = std::fs::read(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_bytes(&bytes)
    }

    /// The effective seed: the config-level seed when present, otherwise the
    /// integration seed, otherwise the library default.
    pub fn master_seed(&self) -> u64 {
        self.seed.or(match self.integration {
            Method::Mc { seed, .. } => Some(seed),
            Method::Quadrature { .. } => None,
        })
        .unwrap_or(DEFAULT_MC_SEED)
    }

    /// The effective method after applying the master seed and any CLI overrides.
    pub fn resolve_method(
        &self,
        seed_override: Option<u64>,
        method_override: Option<MethodOverride>,
    ) -> Method {
        let seed = seed_override.unwrap_or_else(|| self.master_seed());
        let samples = match self.integration {
            Method::Mc { n, .. } => n,
            Method::Quadrature { .. } => DEFAULT_MC_SAMPLES,
        };
        let base = match method_override {
            None => self.integration.clone(),
            Some(MethodOverride::Quadrature) => match self.integration {
                Method::Quadrature { order } => Method::Quadrature { order },
                Method::Mc { .. } => Method::quadrature(),
            },
            Some(MethodOverride::Mc) => Method::mc(samples, seed),
        };
        match base {
            Method::Quadrature { order } => Method::Quadrature { order },
            Method::Mc { n, .. } => Method::mc(n, seed),
        }
    }

    fn require_domain(&self) -> Result<&Domain> {
        self.domain.as_ref().ok_or_else(|| {
            Error::Config(format!(
                "experiment '{}' needs a domain",
                self.experiment.as_str()
            ))
        })
    }

    /// Fetches a required fixture and checks its shape, naming the fixture in
    /// every diagnostic.
    pub fn form(&self, role: &str, degree: usize) -> Result<&FormField> {
        let f = self.forms.get(role).ok_or_else(|| {
            Error::Config(format!(
                "experiment '{}' needs a form fixture '{role}'",
                self.experiment.as_str()
            ))
        })?;
        if f.dim() != self.dim {
            return Err(Error::Config(format!(
                "form '{role}': dim {} disagrees with config dim {}",
                f.dim(),
                self.dim
            )));
        }
        if f.degree() != degree {
            return Err(Error::Config(format!(
                "form '{role}': expected degree {degree}, got {}",
                f.degree()
            )));
        }
        Ok(f)
    }

    pub fn schedule(&self) -> Vec<f64> {
        self.epsilon_schedule
            .clone()
            .unwrap_or_else(crate::surface::default_epsilon_schedule)
    }

    /// Structural validation: every fixture parses and type-checks before any
    /// computation starts.
    pub fn validate(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::Config("dim must be >= 1".into()));
        }
        self.measure.build(self.dim)?;
        for (role, f) in &self.forms {
            if f.dim() != self.dim {
                return Err(Error::Config(format!(
                    "form '{role}': dim {} disagrees with config dim {}",
                    f.dim(),
                    self.dim
                )));
            }
        }
        if let Some(d) = &self.domain {
            if d.dim() != self.dim {
                return Err(Error::Config(format!(
                    "domain: dim {} disagrees with config dim {}",
                    d.dim(),
                    self.dim
                )));
            }
        }
        if let Some(schedule) = &self.epsilon_schedule {
            if schedule.is_empty() {
                return Err(Error::Config("epsilon_schedule must be non-empty".into()));
            }
            if !schedule.iter().all(|e| e.is_finite() && *e > 0.0) {
                return Err(Error::Config(
                    "epsilon_schedule entries must be positive".into(),
                ));
            }
            if schedule.windows(2).any(|w| w[1] >= w[0]) {
                return Err(Error::Config(
                    "epsilon_schedule must be strictly decreasing".into(),
                ));
            }
        }
        match self.experiment {
            ExperimentKind::AlgebraCheck => {}
            ExperimentKind::AdjointCheck => {
                let g = self.form("g", self.form_degree("g")?)?;
                let f = self.form("f", g.degree() + 1)?;
                let _ = f;
            }
            ExperimentKind::LayerConverge => {
                self.require_domain()?;
            }
            ExperimentKind::BoundaryPairing => {
                self.require_domain()?;
                self.form("g", 1)?;
            }
            ExperimentKind::StokesCheck => {
                self.require_domain()?;
                self.form("omega", 1)?;
            }
        }
        Ok(())
    }

    fn form_degree(&self, role: &str) -> Result<usize> {
        self.forms
            .get(role)
            .map(|f| f.degree())
            .ok_or_else(|| {
                Error::Config(format!(
                    "experiment '{}' needs a form fixture '{role}'",
                    self.experiment.as_str()
                ))
            })
    }
}

/// CLI-level method override.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodOverride {
    Quadrature,
    Mc,
}

impl std::str::FromStr for MethodOverride {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadrature" => Ok(MethodOverride::Quadrature),
            "mc" => Ok(MethodOverride::Mc),
            other => Err(Error::Config(format!(
                "unknown method '{other}' (expected 'quadrature' or 'mc')"
            ))),
        }
    }
}
