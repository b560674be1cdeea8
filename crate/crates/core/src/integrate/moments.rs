//! Incomplete Gaussian moments and piecewise-polynomial axis windows.
//!
//! `M_k(a, b; sigma) = ∫_a^b t^k φ_sigma(t) dt` satisfies the two-term recursion
//! obtained by integrating `t^(k-1) · (t φ_sigma)` by parts:
//!
//! `M_k = sigma^2 [ (k-1) M_(k-2) + a^(k-1) φ_sigma(a) - b^(k-1) φ_sigma(b) ]`
//!
//! with `M_0 = Φ(b/sigma) - Φ(a/sigma)`. Both endpoints may be infinite. This turns
//! every integral of `polynomial × window` against a Gaussian axis marginal into a
//! closed-form expression, which is what makes sharp indicator layers integrable
//! without smoothing error.

use libm::erfc;

use crate::forms::Poly1;

/// Standard normal CDF, accurate in both tails.
pub(crate) fn std_normal_cdf(z: f64) -> f64 {
    if z == f64::NEG_INFINITY {
        return 0.0;
    }
    if z == f64::INFINITY {
        return 1.0;
    }
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

fn gaussian_pdf(t: f64, sigma: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    let z = t / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
}

/// `t^k φ_sigma(t)` with the convention that it vanishes at infinite `t`.
fn boundary_term(t: f64, k: usize, sigma: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    t.powi(k as i32) * gaussian_pdf(t, sigma)
}

/// Returns `[M_0, M_1, ..., M_max_k]` for the interval `[a, b]` (either endpoint
/// may be infinite) against the centered Gaussian with standard deviation `sigma`.
pub fn gaussian_moments(max_k: usize, a: f64, b: f64, sigma: f64) -> Vec<f64> {
    assert!(sigma > 0.0, "sigma must be positive");
    assert!(a <= b, "moment interval must be ordered");
    let var = sigma * sigma;
    let mut m = Vec::with_capacity(max_k + 1);
    m.push(std_normal_cdf(b / sigma) - std_normal_cdf(a / sigma));
    for k in 1..=max_k {
        let prev = if k >= 2 { m[k - 2] } else { 0.0 };
        let value = var
            * ((k as f64 - 1.0) * prev + boundary_term(a, k - 1, sigma)
                - boundary_term(b, k - 1, sigma));
        m.push(value);
    }
    m
}

/// One window piece: a polynomial weight supported on `[lo, hi]`.
#[derive(Clone, Debug)]
pub struct WindowPiece {
    pub lo: f64,
    pub hi: f64,
    pub weight: Poly1,
}

/// A piecewise-polynomial weight function on one axis, e.g. a sharp layer
/// indicator, a mollified indicator, or its slope profile.
#[derive(Clone, Debug, Default)]
pub struct AxisWindow {
    pub pieces: Vec<WindowPiece>,
}

impl AxisWindow {
    pub fn new(pieces: Vec<WindowPiece>) -> Self {
        AxisWindow { pieces }
    }

    /// Pointwise evaluation (used to cross-check the closed form against
    /// brute-force integration in tests).
    pub fn eval(&self, t: f64) -> f64 {
        let mut v = 0.0;
        for piece in &self.pieces {
            if t >= piece.lo && t <= piece.hi {
                v += piece.weight.eval(t);
                // Pieces are disjoint except at shared endpoints; count once.
                break;
            }
        }
        v
    }
}

/// `∫ window(t) · q(t) φ_sigma(t) dt` in closed form.
pub fn axis_window_integral(window: &AxisWindow, q: &Poly1, sigma: f64) -> f64 {
    let mut total = 0.0;
    for piece in &window.pieces {
        if piece.lo >= piece.hi {
            continue;
        }
        let integrand = piece.weight.mul(q);
        let coeffs = integrand.coeffs();
        if coeffs.is_empty() {
            continue;
        }
        let m = gaussian_moments(coeffs.len() - 1, piece.lo, piece.hi, sigma);
        let mut piece_total = 0.0;
        for (k, c) in coeffs.iter().enumerate() {
            piece_total += c * m[k];
        }
        total += piece_total;
    }
    total
}
