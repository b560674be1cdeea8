//! Shared integration backends: tensorized Gauss–Hermite quadrature for Gaussian
//! product measures, seeded deterministic parallel Monte Carlo, exact piecewise
//! axis-integrals via incomplete Gaussian moments, and the brute-force 1-D Simpson
//! oracle the test suites use to certify expected constants.

mod moments;
mod monte_carlo;
mod oracle;
mod quadrature;

pub use moments::{gaussian_moments, AxisWindow, WindowPiece};
pub use monte_carlo::mc_estimate;
pub use oracle::oracle_integrate_1d;
pub use quadrature::{integrate_axis_factored, integrate_quadrature, GaussHermite};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::GaussianProduct;

/// Default per-axis Gauss–Hermite order (polynomials up to degree 23 are exact).
pub const DEFAULT_QUADRATURE_ORDER: usize = 12;
/// Default Monte Carlo sample count.
pub const DEFAULT_MC_SAMPLES: u64 = 1_000_000;
/// Default Monte Carlo seed.
pub const DEFAULT_MC_SEED: u64 = 42;

/// An integration method. Serializes as `{"method": "quadrature", "order": 12}` or
/// `{"method": "mc", "n": 1000000, "seed": 42}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Method {
    Quadrature {
        #[serde(default = "default_order")]
        order: usize,
    },
    Mc {
        #[serde(default = "default_samples")]
        n: u64,
        #[serde(default = "default_seed")]
        seed: u64,
    },
}

fn default_order() -> usize {
    DEFAULT_QUADRATURE_ORDER
}

fn default_samples() -> u64 {
    DEFAULT_MC_SAMPLES
}

fn default_seed() -> u64 {
    DEFAULT_MC_SEED
}

impl Method {
    pub fn quadrature() -> Self {
        Method::Quadrature {
            order: DEFAULT_QUADRATURE_ORDER,
        }
    }

    pub fn mc(n: u64, seed: u64) -> Self {
        Method::Mc { n, seed }
    }

    pub fn is_quadrature(&self) -> bool {
        matches!(self, Method::Quadrature { .. })
    }

    /// The same method with the Monte Carlo seed replaced by a derived one; quadrature
    /// methods are returned unchanged. Lets one experiment run several statistically
    /// independent sub-integrals from a single master seed.
    pub fn with_derived_seed(&self, label: u64) -> Method {
        match self {
            Method::Quadrature { order } => Method::Quadrature { order: *order },
            Method::Mc { n, seed } => Method::Mc {
                n: *n,
                seed: derive_seed(*seed, label),
            },
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Method::Quadrature { order } if *order < 1 => Err(Error::InvalidParameter(
                "quadrature order must be >= 1".into(),
            )),
            Method::Mc { n, .. } if *n < 1 => {
                Err(Error::InvalidParameter("mc sample count must be >= 1".into()))
            }
            _ => Ok(()),
        }
    }
}

/// An integral estimate; `stderr` is 0 for quadrature and the sample standard error
/// for Monte Carlo.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, stderr: 0.0 }
    }
}

/// Tolerance policy for identity checks: absolute tolerance on exact (quadrature)
/// paths, a standard-error multiplier on Monte Carlo paths.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub quadrature_abs: f64,
    pub mc_z: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            quadrature_abs: 1e-10,
            mc_z: 3.0,
        }
    }
}

impl TolerancePolicy {
    /// The tolerance granted to a gap between two estimates under the given method.
    pub fn gap_tolerance(&self, method: &Method, lhs: &Estimate, rhs: &Estimate) -> f64 {
        match method {
            Method::Quadrature { .. } => self.quadrature_abs,
            Method::Mc { .. } => {
                self.mc_z * (lhs.stderr * lhs.stderr + rhs.stderr * rhs.stderr).sqrt()
            }
        }
    }
}

/// Integrates `f` against the Gaussian product measure with the chosen method.
pub fn integrate(
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    mu: &GaussianProduct,
    method: &Method,
) -> Result<Estimate> {
    method.validate()?;
    match method {
        Method::Quadrature { order } => {
            Ok(Estimate::exact(integrate_quadrature(f, mu, *order)?))
        }
        Method::Mc { n, seed } => Ok(mc_estimate(f, mu, *n, *seed)),
    }
}

/// SplitMix64-derived seed for a labelled sub-stream of a master seed.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    let mut z = seed ^ label.wrapping_mul(0x9E3779B97F4A7C15);
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Compensated (Kahan) accumulator for the deterministic reductions.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}
