//! Product of centered one-dimensional Gaussians, one per coordinate axis.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::exterior::{AltTensor, MultiIndex};
use crate::forms::{Expr, FormField};

/// The probability measure `μ = ⊗_p N(0, σ_p²)` on the truncated space.
///
/// Its density relative to Lebesgue measure is smooth and strictly positive, and
/// the logarithmic derivative along axis `p` is `β_p(x) = -x_p / σ_p²`, which is
/// what the measure-adjoint differential and the product rule consume.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianProduct {
    variances: Vec<f64>,
}

impl GaussianProduct {
    pub fn new(variances: Vec<f64>) -> Result<Self> {
        if variances.is_empty() {
            return Err(Error::InvalidParameter(
                "measure needs at least one axis".into(),
            ));
        }
        if !variances.iter().all(|v| v.is_finite() && *v > 0.0) {
            return Err(Error::InvalidParameter(
                "variances must be finite and positive".into(),
            ));
        }
        Ok(GaussianProduct { variances })
    }

    /// Unit variance on every axis.
    pub fn standard(dim: usize) -> Self {
        GaussianProduct {
            variances: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.variances.len()
    }

    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    /// Density with respect to Lebesgue measure at `x`.
    pub fn density(&self, x: &[f64]) -> f64 {
        self.log_density(x).exp()
    }

    pub fn log_density(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim(), "point dimension mismatch");
        let mut s = 0.0;
        for (xi, v) in x.iter().zip(&self.variances) {
            s += -0.5 * xi * xi / v - 0.5 * (2.0 * std::f64::consts::PI * v).ln();
        }
        s
    }

    /// The logarithmic derivative `β(x)` as a 1-tensor: `Σ_p (-x_p / σ_p²) e_p`.
    ///
    /// Fails with [`Error::ZeroDensity`] if the density underflows to zero at `x`,
    /// where the logarithmic derivative stops being meaningful in floating point.
    pub fn log_derivative(&self, x: &[f64]) -> Result<AltTensor> {
        if self.density(x) == 0.0 {
            return Err(Error::ZeroDensity);
        }
        let mut beta = AltTensor::zero(1);
        for (p, (xi, v)) in x.iter().zip(&self.variances).enumerate() {
            beta.insert(MultiIndex::singleton(p as u32 + 1), -xi / v);
        }
        Ok(beta)
    }

    /// The logarithmic derivative as a symbolic 1-form field,
    /// `β = Σ_p (-1/σ_p²) x_p · e_p`.
    pub fn log_derivative_form(&self) -> FormField {
        let entries = self.variances.iter().enumerate().map(|(p, v)| {
            let p1 = p as u32 + 1;
            (
                MultiIndex::singleton(p1),
                Expr::scale(-1.0 / v, Expr::coord(p1)),
            )
        });
        FormField::from_entries(1, self.dim(), entries)
            .expect("log-derivative entries are always valid")
    }

    /// Draws one sample into `out`.
    pub fn sample_into(&self, rng: &mut impl Rng, out: &mut [f64]) {
        assert_eq!(out.len(), self.dim(), "sample buffer dimension mismatch");
        for (xi, v) in out.iter_mut().zip(&self.variances) {
            let z: f64 = rng.sample(StandardNormal);
            *xi = v.sqrt() * z;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::oracle_integrate_1d;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_bad_variances() {
        assert!(GaussianProduct::new(vec![]).is_err());
        assert!(GaussianProduct::new(vec![1.0, 0.0]).is_err());
        assert!(GaussianProduct::new(vec![-1.0]).is_err());
        assert!(GaussianProduct::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn density_factorizes_and_normalizes() {
        let mu = GaussianProduct::new(vec![0.5, 2.0]).unwrap();
        // Each axis marginal has unit mass (Simpson oracle, tolerance 1e-10).
        for &v in mu.variances() {
            let sigma = v.sqrt();
            let mass = oracle_integrate_1d(
                |_| 1.0,
                |t| (-0.5 * t * t / v).exp() / (2.0 * std::f64::consts::PI * v).sqrt(),
                -10.0 * sigma,
                10.0 * sigma,
                20_000,
            );
            assert_relative_eq!(mass, 1.0, epsilon = 1e-10);
        }
        // Product structure at a point.
        let x = [0.3f64, -1.2];
        let d0 = (-0.5 * x[0] * x[0] / 0.5).exp() / (2.0 * std::f64::consts::PI * 0.5).sqrt();
        let d1 = (-0.5 * x[1] * x[1] / 2.0).exp() / (2.0 * std::f64::consts::PI * 2.0).sqrt();
        assert_relative_eq!(mu.density(&x), d0 * d1, max_relative = 1e-14);
    }

    #[test]
    fn log_derivative_matches_examples() {
        // Unit variances at x = (1, -2): β = -e1 + 2 e2.
        let mu = GaussianProduct::standard(2);
        let beta = mu.log_derivative(&[1.0, -2.0]).unwrap();
        assert_eq!(beta.get(&MultiIndex::singleton(1)), -1.0);
        assert_eq!(beta.get(&MultiIndex::singleton(2)), 2.0);
        // Scaled axis: variance 4 halves ... β_p = -x_p/σ_p².
        let mu = GaussianProduct::new(vec![4.0]).unwrap();
        let beta = mu.log_derivative(&[2.0]).unwrap();
        assert_relative_eq!(beta.get(&MultiIndex::singleton(1)), -0.5);
    }

    #[test]
    fn log_derivative_form_evaluates_to_pointwise() {
        let mu = GaussianProduct::new(vec![0.5, 1.0, 2.0]).unwrap();
        let form = mu.log_derivative_form();
        let x = [0.4, -1.1, 2.2];
        let at = form.evaluate(&x).unwrap();
        let direct = mu.log_derivative(&x).unwrap();
        let diff = &at - &direct;
        assert!(diff.hs_norm() < 1e-15);
    }

    #[test]
    fn zero_density_is_reported() {
        let mu = GaussianProduct::standard(1);
        // exp(-0.5 * 60^2) underflows f64: the density is exactly 0.0 in floating point.
        let err = mu.log_derivative(&[60.0]).unwrap_err();
        assert!(matches!(err, Error::ZeroDensity));
    }

    #[test]
    fn log_density_agrees_with_density() {
        let mu = GaussianProduct::new(vec![1.5, 0.7]).unwrap();
        let x = [0.2, -0.9];
        assert_relative_eq!(mu.log_density(&x).exp(), mu.density(&x), max_relative = 1e-14);
    }
}
