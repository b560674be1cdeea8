//! The boundary/volume identity for codegree-1 form measures:
//! `∫_∂V ω = ∫_V dω`.
//!
//! Both sides are produced as extrapolated traces, and the mechanism behind the
//! identity is checked at every width: because total masses of differentials
//! vanish on the full space, `∫ (∇f_ε, F) dμ + ∫ f_ε · density(dω) dμ = 0`
//! holds exactly for each ε, not just in the limit. As ε → 0 the first term
//! tends to minus the boundary side and the second to the volume side.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{Expr, Poly1};
use crate::integrate::{
    integrate, integrate_axis_factored, Estimate, Method, TolerancePolicy,
};
use crate::measures::CoForm;
use crate::surface::layer::{
    degree1_components, gradient_pairing_raw, headline, normal_dot, richardson_rows,
    tau_window_to_axis, validate_schedule,
};
use crate::surface::{Domain, Mollifier};
use crate::surface::layer::TraceRow;
use crate::surface::surface_integral;

/// The per-width identity residual `∫ (∇f_ε, F) dμ + ∫ f_ε · density(dω) dμ`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct IdentityRow {
    pub epsilon: f64,
    pub value: f64,
    pub stderr: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Outcome of a full boundary/volume comparison.
#[derive(Clone, Debug, Serialize)]
pub struct StokesReport {
    /// Extrapolated `∫_∂V ω`.
    pub boundary: Estimate,
    /// Extrapolated `lim ∫ f_ε · density(dω) dμ`.
    pub volume: Estimate,
    /// Sharp-indicator cross-check `∫ 1_V · density(dω) dμ`.
    pub volume_sharp: Estimate,
    /// `|boundary - volume|`.
    pub gap: f64,
    /// `|volume - volume_sharp|`.
    pub sharp_gap: f64,
    pub boundary_trace: Vec<TraceRow>,
    pub volume_trace: Vec<TraceRow>,
    pub identity: Vec<IdentityRow>,
    pub identity_pass: bool,
}

/// `∫ f_ε(x) · dens(x) dμ` for the mollified indicator of the domain.
fn mollified_volume_raw(
    domain: &Domain,
    dens: &Expr,
    omega: &CoForm,
    eps: f64,
    method: &Method,
) -> Result<Estimate> {
    let mu = omega.base();
    match method {
        Method::Quadrature { order } => {
            let (axis, s, c) = domain.canonical_axis().ok_or_else(|| {
                Error::UnsupportedQuadrature(
                    "volume quadrature needs an axis-aligned halfspace; use mc".into(),
                )
            })?;
            let window = tau_window_to_axis(
                &[
                    (f64::NEG_INFINITY, -eps, Poly1::constant(1.0)),
                    (-eps, eps, Poly1(vec![0.5, -1.0 / (2.0 * eps)])),
                ],
                s,
                c,
            );
            let value = integrate_axis_factored(
                mu,
                axis,
                &window,
                &|x| dens.axis_poly(axis as u32 + 1, x),
                *order,
            )?;
            Ok(Estimate::exact(value))
        }
        Method::Mc { .. } => {
            let moll = Mollifier::new(domain, eps)?;
            integrate(&|x: &[f64]| moll.value(x) * dens.eval(x), mu, method)
        }
    }
}

/// `∫ 1_V(x) · dens(x) dμ`: the sharp-indicator volume integral.
fn sharp_volume(
    domain: &Domain,
    dens: &Expr,
    omega: &CoForm,
    method: &Method,
) -> Result<Estimate> {
    let mu = omega.base();
    match method {
        Method::Quadrature { order } => {
            let (axis, s, c) = domain.canonical_axis().ok_or_else(|| {
                Error::UnsupportedQuadrature(
                    "volume quadrature needs an axis-aligned halfspace; use mc".into(),
                )
            })?;
            let window =
                tau_window_to_axis(&[(f64::NEG_INFINITY, 0.0, Poly1::constant(1.0))], s, c);
            let value = integrate_axis_factored(
                mu,
                axis,
                &window,
                &|x| dens.axis_poly(axis as u32 + 1, x),
                *order,
            )?;
            Ok(Estimate::exact(value))
        }
        Method::Mc { .. } => integrate(
            &|x: &[f64]| {
                if domain.contains(x) {
                    dens.eval(x)
                } else {
                    0.0
                }
            },
            mu,
            method,
        ),
    }
}

/// One-pass estimate of the identity residual at width ε. Under Monte Carlo the
/// two terms share samples, so the reported standard error is the error of the
/// residual itself.
fn identity_raw(
    domain: &Domain,
    comps: &[(usize, Expr)],
    dens: &Expr,
    omega: &CoForm,
    eps: f64,
    method: &Method,
) -> Result<Estimate> {
    match method {
        Method::Quadrature { .. } => {
            let grad = gradient_pairing_raw(domain, comps, omega.base(), eps, method)?;
            let vol = mollified_volume_raw(domain, dens, omega, eps, method)?;
            Ok(Estimate::exact(grad.value + vol.value))
        }
        Method::Mc { .. } => {
            let moll = Mollifier::new(domain, eps)?;
            let slope = -1.0 / (2.0 * eps);
            integrate(
                &|x: &[f64]| {
                    let mut v = moll.value(x) * dens.eval(x);
                    if let Some(t) = domain.tau(x) {
                        if t.abs() < eps {
                            let y = domain.project(x).expect("projection valid inside band");
                            v += slope * normal_dot(domain, &y, comps, x);
                        }
                    }
                    v
                },
                omega.base(),
                method,
            )
        }
    }
}

/// Verifies `∫_∂V ω = ∫_V dω` for a codegree-1 form measure over the given
/// domain, reporting both extrapolated sides, a sharp-indicator cross-check of
/// the volume side, and the per-width proof identity.
pub fn stokes_check(
    omega: &CoForm,
    domain: &Domain,
    schedule: &[f64],
    method: &Method,
    policy: &TolerancePolicy,
) -> Result<StokesReport> {
    if omega.codegree() != 1 {
        return Err(Error::DegreeMismatch {
            context: "stokes_check",
            expected: 1,
            got: omega.codegree(),
        });
    }
    if domain.dim() != omega.base().dim() {
        return Err(Error::DimMismatch {
            context: "stokes_check",
            expected: omega.base().dim(),
            got: domain.dim(),
        });
    }
    validate_schedule(domain, schedule)?;
    let comps = degree1_components(omega.density_form())?;
    let dens = omega.differential()?.scalar_density()?;

    let boundary = surface_integral(omega, domain, schedule, method)?;

    let mut volume_raw = Vec::with_capacity(schedule.len());
    let mut identity = Vec::with_capacity(schedule.len());
    let mut identity_pass = true;
    for (k, eps) in schedule.iter().enumerate() {
        let vol = mollified_volume_raw(
            domain,
            &dens,
            omega,
            *eps,
            &method.with_derived_seed(3000 + k as u64),
        )?;
        volume_raw.push((*eps, vol));
        let res = identity_raw(
            domain,
            &comps,
            &dens,
            omega,
            *eps,
            &method.with_derived_seed(4000 + k as u64),
        )?;
        let tolerance = match method {
            Method::Quadrature { .. } => policy.quadrature_abs,
            Method::Mc { .. } => (policy.mc_z * res.stderr).max(policy.quadrature_abs),
        };
        let pass = res.value.abs() <= tolerance;
        identity_pass &= pass;
        identity.push(IdentityRow {
            epsilon: *eps,
            value: res.value,
            stderr: res.stderr,
            tolerance,
            pass,
        });
    }
    let volume_trace = richardson_rows(&volume_raw);
    let volume = headline(&volume_trace, method);
    let volume_sharp = sharp_volume(domain, &dens, omega, &method.with_derived_seed(3999))?;

    Ok(StokesReport {
        gap: (boundary.value.value - volume.value).abs(),
        sharp_gap: (volume.value - volume_sharp.value).abs(),
        boundary: boundary.value,
        volume,
        volume_sharp,
        boundary_trace: boundary.trace,
        volume_trace,
        identity,
        identity_pass,
    })
}
