//! Gauss–Hermite quadrature for Gaussian product measures.
//!
//! Nodes and weights come from the Golub–Welsch eigendecomposition of the Hermite
//! Jacobi matrix. A rule of order `k` integrates polynomials of degree `2k - 1`
//! exactly against each axis marginal, and the full-measure rule is the tensor
//! product across axes.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::forms::Poly1;
use crate::integrate::moments::{axis_window_integral, AxisWindow};
use crate::integrate::KahanSum;
use crate::measures::GaussianProduct;

/// A one-dimensional Gauss–Hermite rule in "physicists'" coordinates
/// (weight `exp(-t^2)`), with the weights normalized to sum to one so they apply
/// directly to a unit Gaussian after scaling nodes by `sqrt(2) * sigma`.
#[derive(Clone, Debug)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Builds the rule of the given order (number of nodes).
    pub fn new(order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidParameter(
                "quadrature order must be >= 1".into(),
            ));
        }
        if order == 1 {
            return Ok(GaussHermite {
                nodes: vec![0.0],
                weights: vec![1.0],
            });
        }
        let mut jacobi = DMatrix::<f64>::zeros(order, order);
        for k in 1..order {
            let off = (k as f64 / 2.0).sqrt();
            jacobi[(k, k - 1)] = off;
            jacobi[(k - 1, k)] = off;
        }
        let eigen = jacobi.symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> = (0..order)
            .map(|i| {
                let v0 = eigen.eigenvectors[(0, i)];
                (eigen.eigenvalues[i], v0 * v0)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let weight_sum: f64 = pairs.iter().map(|p| p.1).sum();
        Ok(GaussHermite {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1 / weight_sum).collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes scaled for a centered Gaussian with the given standard deviation.
    pub fn scaled_nodes(&self, sigma: f64) -> Vec<f64> {
        let scale = std::f64::consts::SQRT_2 * sigma;
        self.nodes.iter().map(|t| scale * t).collect()
    }

    /// Normalized weights (sum to one).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` against a centered one-dimensional Gaussian of the given
    /// standard deviation.
    pub fn integrate_1d(&self, f: impl Fn(f64) -> f64, sigma: f64) -> f64 {
        let nodes = self.scaled_nodes(sigma);
        let mut acc = KahanSum::default();
        for (x, w) in nodes.iter().zip(&self.weights) {
            acc.add(w * f(*x));
        }
        acc.value()
    }
}

/// Integrates `f` against the full Gaussian product measure by tensorizing the
/// one-dimensional rule across all axes. Exact for polynomials of per-axis degree
/// up to `2 * order - 1`.
pub fn integrate_quadrature(
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    mu: &GaussianProduct,
    order: usize,
) -> Result<f64> {
    let rule = GaussHermite::new(order)?;
    let dim = mu.dim();
    let total_nodes = (order as f64).powi(dim as i32);
    if total_nodes > 2e8 {
        return Err(Error::UnsupportedQuadrature(format!(
            "tensor grid of {order}^{dim} nodes is too large; reduce the order or use mc"
        )));
    }
    let axis_nodes: Vec<Vec<f64>> = mu
        .variances()
        .iter()
        .map(|v| rule.scaled_nodes(v.sqrt()))
        .collect();
    let mut acc = KahanSum::default();
    let mut idx = vec![0usize; dim];
    let mut x = vec![0.0f64; dim];
    loop {
        let mut w = 1.0;
        for p in 0..dim {
            x[p] = axis_nodes[p][idx[p]];
            w *= rule.weights[idx[p]];
        }
        acc.add(w * f(&x));
        // Odometer increment over the tensor grid.
        let mut p = 0;
        loop {
            if p == dim {
                return Ok(acc.value());
            }
            idx[p] += 1;
            if idx[p] < order {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

/// Integrates an integrand of the factored form `w(x_axis) * q(x_axis; x_rest)`
/// where `w` is the piecewise-polynomial window and `q(.; x_rest)` is the
/// polynomial in the axis coordinate returned by `cross` at each cross-axis node.
///
/// The axis factor is integrated in closed form via incomplete Gaussian moments,
/// so sharp windows (indicator layers, ramps) cost no quadrature error; the
/// remaining axes use the tensorized Gauss–Hermite rule.
pub fn integrate_axis_factored(
    mu: &GaussianProduct,
    axis: usize,
    window: &AxisWindow,
    cross: &dyn Fn(&[f64]) -> Result<Poly1>,
    order: usize,
) -> Result<f64> {
    let dim = mu.dim();
    if axis >= dim {
        return Err(Error::InvalidIndex(format!(
            "axis {axis} out of range for dimension {dim}"
        )));
    }
    let rule = GaussHermite::new(order)?;
    let sigma_axis = mu.variances()[axis].sqrt();
    let cross_axes: Vec<usize> = (0..dim).filter(|p| *p != axis).collect();
    let axis_nodes: Vec<Vec<f64>> = cross_axes
        .iter()
        .map(|p| rule.scaled_nodes(mu.variances()[*p].sqrt()))
        .collect();
    let mut acc = KahanSum::default();
    let mut idx = vec![0usize; cross_axes.len()];
    let mut x = vec![0.0f64; dim];
    loop {
        let mut w = 1.0;
        for (slot, p) in cross_axes.iter().enumerate() {
            x[*p] = axis_nodes[slot][idx[slot]];
            w *= rule.weights[idx[slot]];
        }
        let q = cross(&x)?;
        acc.add(w * axis_window_integral(window, &q, sigma_axis));
        let mut slot = 0;
        loop {
            if slot == cross_axes.len() {
                return Ok(acc.value());
            }
            idx[slot] += 1;
            if idx[slot] < order {
                break;
            }
            idx[slot] = 0;
            slot += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::oracle_integrate_1d;
    use approx::assert_relative_eq;

    #[test]
    fn weights_sum_to_one() {
        for order in [1, 2, 5, 12, 40] {
            let rule = GaussHermite::new(order).unwrap();
            let s: f64 = rule.weights().iter().sum();
            assert_relative_eq!(s, 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn gaussian_moments_exact() {
        // E[t^k] for a unit Gaussian: 0, 1, 0, 3, 0, 15 for k = 1..6.
        let rule = GaussHermite::new(12).unwrap();
        let expect = [1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0];
        for (k, want) in expect.iter().enumerate() {
            let got = rule.integrate_1d(|t| t.powi(k as i32), 1.0);
            assert!(
                (got - want).abs() < 1e-12,
                "moment {k}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn scaled_moments_match_variance() {
        let rule = GaussHermite::new(8).unwrap();
        let sigma = 1.7f64;
        assert_relative_eq!(
            rule.integrate_1d(|t| t * t, sigma),
            sigma * sigma,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            rule.integrate_1d(|t| t.powi(4), sigma),
            3.0 * sigma.powi(4),
            max_relative = 1e-13
        );
    }

    #[test]
    fn matches_simpson_oracle_on_smooth_integrand() {
        // Certified against the brute-force oracle: E[cos(t)] for sigma = 1 is
        // exp(-1/2) = 0.6065306597126334.
        let rule = GaussHermite::new(40).unwrap();
        let got = rule.integrate_1d(|t| t.cos(), 1.0);
        assert_relative_eq!(got, 0.6065306597126334, epsilon = 1e-12);
        let density = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let oracle = oracle_integrate_1d(|t| t.cos(), density, -10.0, 10.0, 20_000);
        assert_relative_eq!(got, oracle, epsilon = 1e-10);
    }

    #[test]
    fn tensor_product_factorizes() {
        // E[x1^2 * x2^4] = sigma1^2 * 3 sigma2^4 under the product measure.
        let mu = GaussianProduct::new(vec![0.5, 2.0]).unwrap();
        let got = integrate_quadrature(&|x: &[f64]| x[0] * x[0] * x[1].powi(4), &mu, 10).unwrap();
        let want = 0.5 * 3.0 * 4.0;
        assert_relative_eq!(got, want, max_relative = 1e-12);
    }

    #[test]
    fn rejects_oversized_grids() {
        let mu = GaussianProduct::standard(12);
        let err = integrate_quadrature(&|_: &[f64]| 1.0, &mu, 40).unwrap_err();
        assert!(matches!(
            err,
            crate::error::Error::UnsupportedQuadrature(_)
        ));
    }
}
