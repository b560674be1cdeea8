//! Integral operators over Gaussian product measures: pairings, L^p and
//! first-order norms, the measure-adjoint differential, and the identity
//! checkers (adjunction and the product rule) built from them.

use crate::error::{Error, Result};
use crate::forms::{contract_form, FormField};
use crate::integrate::{integrate, Estimate, Method, TolerancePolicy};
use crate::measures::{wedge_measure, CoForm, GaussianProduct};

/// Matched coefficient pairs for a pointwise inner product, precompiled so the
/// per-sample cost is one expression evaluation per shared index.
fn matched_pairs<'a>(
    a: &'a FormField,
    b: &'a FormField,
) -> Vec<(&'a crate::forms::Expr, &'a crate::forms::Expr)> {
    a.iter()
        .filter_map(|(idx, ea)| b.coeff(idx).map(|eb| (ea, eb)))
        .collect()
}

fn check_same_shape(context: &'static str, a: &FormField, b: &FormField) -> Result<()> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch {
            context,
            expected: a.degree(),
            got: b.degree(),
        });
    }
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            context,
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(())
}

/// `⟨ω, f⟩ = ∫ (F(x), f(x)) dμ` for a codegree-`n` measure `ω = F μ` and an
/// `n`-form field `f`.
pub fn pairing(omega: &CoForm, f: &FormField, method: &Method) -> Result<Estimate> {
    check_same_shape("pairing", omega.density_form(), f)?;
    let pairs = matched_pairs(omega.density_form(), f);
    integrate(
        &|x: &[f64]| pairs.iter().map(|(a, b)| a.eval(x) * b.eval(x)).sum(),
        omega.base(),
        method,
    )
}

/// Pointwise squared Hilbert–Schmidt norm of a form field.
fn hs_norm_sq_at(f: &FormField, x: &[f64]) -> f64 {
    f.iter().map(|(_, e)| {
        let v = e.eval(x);
        v * v
    })
    .sum()
}

/// `‖f‖_p = (∫ ‖f(x)‖^p dμ)^(1/p)` for `p > 1`.
pub fn lp_norm(f: &FormField, mu: &GaussianProduct, p: f64, method: &Method) -> Result<f64> {
    let p_valid = p.is_finite() && p > 1.0;
    if !p_valid {
        return Err(Error::InvalidParameter(format!(
            "lp_norm requires finite p > 1, got {p}"
        )));
    }
    if f.dim() != mu.dim() {
        return Err(Error::DimMismatch {
            context: "lp_norm",
            expected: mu.dim(),
            got: f.dim(),
        });
    }
    let est = integrate(
        &|x: &[f64]| hs_norm_sq_at(f, x).powf(p / 2.0),
        mu,
        method,
    )?;
    Ok(est.value.max(0.0).powf(1.0 / p))
}

/// First-order norm `‖f‖_p + ‖δf‖_p + (∫ ‖β(x)‖^p ‖f(x)‖^p dμ)^(1/p)`, the
/// quantity whose finiteness licenses the adjunction between `d` and `d*`.
/// Requires degree >= 1 (the codifferential term).
pub fn sobolev_norm(
    f: &FormField,
    mu: &GaussianProduct,
    p: f64,
    method: &Method,
) -> Result<f64> {
    let delta = f.codifferential()?;
    let base = lp_norm(f, mu, p, &method.with_derived_seed(101))?;
    let delta_part = lp_norm(&delta, mu, p, &method.with_derived_seed(102))?;
    let variances = mu.variances().to_vec();
    let weighted = integrate(
        &|x: &[f64]| {
            let beta_sq: f64 = x
                .iter()
                .zip(&variances)
                .map(|(xi, v)| {
                    let b = xi / v;
                    b * b
                })
                .sum();
            (beta_sq * hs_norm_sq_at(f, x)).powf(p / 2.0)
        },
        mu,
        &method.with_derived_seed(103),
    )?;
    Ok(base + delta_part + weighted.value.max(0.0).powf(1.0 / p))
}

/// The measure-adjoint differential `d*f = -(β ⌟ f + δf)`, one degree lower.
/// Satisfies `∫(dg, f) dμ = ∫(g, d*f) dμ` for suitable `g` of degree `deg(f) - 1`.
pub fn dstar(f: &FormField, mu: &GaussianProduct) -> Result<FormField> {
    if f.dim() != mu.dim() {
        return Err(Error::DimMismatch {
            context: "dstar",
            expected: mu.dim(),
            got: f.dim(),
        });
    }
    let beta = mu.log_derivative_form();
    let contracted = contract_form(&beta, f)?;
    let delta = f.codifferential()?;
    Ok(contracted.add(&delta)?.scale(-1.0))
}

/// Outcome of one adjunction check `∫(dg, f) dμ =? ∫(g, d*f) dμ`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct AdjointReport {
    pub lhs: Estimate,
    pub rhs: Estimate,
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks the adjunction for `g` of degree `n` and `f` of degree `n + 1`. The two
/// sides use independently derived Monte Carlo seeds, so the combined standard
/// error is the right scale for the gap.
pub fn adjoint_check(
    g: &FormField,
    f: &FormField,
    mu: &GaussianProduct,
    method: &Method,
    policy: &TolerancePolicy,
) -> Result<AdjointReport> {
    if f.degree() != g.degree() + 1 {
        return Err(Error::DegreeMismatch {
            context: "adjoint_check",
            expected: g.degree() + 1,
            got: f.degree(),
        });
    }
    let dg = CoForm::new(mu.clone(), g.differential())?;
    let lhs = pairing(&dg, f, &method.with_derived_seed(1))?;
    let g_measure = CoForm::new(mu.clone(), g.clone())?;
    let rhs = pairing(&g_measure, &dstar(f, mu)?, &method.with_derived_seed(2))?;
    let gap = (lhs.value - rhs.value).abs();
    let tolerance = policy.gap_tolerance(method, &lhs, &rhs);
    Ok(AdjointReport {
        lhs,
        rhs,
        gap,
        pass: gap <= tolerance,
        tolerance,
    })
}

/// An axis-aligned box, used as a test region for measure-level identities.
#[derive(Clone, Debug)]
pub struct Region(pub Vec<(f64, f64)>);

impl Region {
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.0.len()
            && x.iter()
                .zip(&self.0)
                .all(|(xi, (lo, hi))| *xi >= *lo && *xi <= *hi)
    }
}

/// Outcome of a product-rule check `d(g ∧ ω) =? g ∧ dω + (-1)^n dg ∧ ω`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LeibnizReport {
    /// Largest coefficient gap between the two sides over the probe points.
    pub max_point_gap: f64,
    /// Per-region gap of box measures (Monte Carlo), with its tolerance.
    pub box_gaps: Vec<(f64, f64)>,
    pub pass: bool,
    pub point_tolerance: f64,
}

/// Checks the product rule for `g` of degree `m` against a coform of codegree
/// `n + 1 > m`, both pointwise at the probe points (exact symbolic densities
/// evaluated and compared) and, for each region, as measures of axis-aligned
/// boxes estimated by Monte Carlo.
pub fn leibniz_check(
    g: &FormField,
    omega: &CoForm,
    points: &[Vec<f64>],
    regions: &[Region],
    method: &Method,
    policy: &TolerancePolicy,
) -> Result<LeibnizReport> {
    let codeg = omega.codegree();
    if codeg == 0 || g.degree() > codeg - 1 {
        return Err(Error::DegreeMismatch {
            context: "leibniz_check",
            expected: g.degree() + 1,
            got: codeg,
        });
    }
    let n = codeg - 1;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let lhs = wedge_measure(g, omega)?.differential()?;
    let rhs_a = wedge_measure(g, &omega.differential()?)?;
    let rhs_b = wedge_measure(&g.differential(), omega)?;
    let rhs = rhs_a
        .density_form()
        .add(&rhs_b.density_form().scale(sign))?;
    let diff = lhs.density_form().add(&rhs.scale(-1.0))?;

    let mut max_point_gap = 0.0f64;
    for x in points {
        let at = diff.evaluate(x)?;
        max_point_gap = max_point_gap.max(at.max_abs_coeff());
    }

    // Box measures use Monte Carlo regardless of the ambient method: indicator
    // integrands are outside the polynomial class the quadrature is exact on.
    let (n_samples, seed) = match method {
        Method::Mc { n, seed } => (*n, *seed),
        Method::Quadrature { .. } => (200_000, 42),
    };
    let mut box_gaps = Vec::new();
    let mut boxes_pass = true;
    for (r_idx, region) in regions.iter().enumerate() {
        let components: Vec<_> = diff.iter().map(|(_, e)| e).collect();
        let mc = Method::mc(n_samples, seed).with_derived_seed(1000 + r_idx as u64);
        let mut worst_gap = 0.0f64;
        let mut worst_tol = 0.0f64;
        if components.is_empty() {
            box_gaps.push((0.0, 0.0));
            continue;
        }
        for (c_idx, expr) in components.iter().enumerate() {
            let est = integrate(
                &|x: &[f64]| if region.contains(x) { expr.eval(x) } else { 0.0 },
                omega.base(),
                &mc.with_derived_seed(c_idx as u64),
            )?;
            let tol = policy.mc_z * est.stderr;
            if est.value.abs() > worst_gap {
                worst_gap = est.value.abs();
                worst_tol = tol;
            }
            if est.value.abs() > tol.max(policy.quadrature_abs) {
                boxes_pass = false;
            }
        }
        box_gaps.push((worst_gap, worst_tol));
    }

    let point_tolerance = policy.quadrature_abs;
    Ok(LeibnizReport {
        pass: max_point_gap <= point_tolerance && boxes_pass,
        max_point_gap,
        box_gaps,
        point_tolerance,
    })
}
