//! Truncated domains with a signed boundary distance.
//!
//! A domain exposes a signed distance `tau` (negative inside, positive outside)
//! that is only trusted within a reach of the boundary, a membership test that
//! works everywhere, a nearest-boundary projection, and the outward unit normal
//! at boundary points. Two shapes cover the shipped experiments: affine
//! halfspaces and cylinders over a finite-dimensional ball.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{AltTensor, MultiIndex};

/// Halfspaces are flat, so their signed distance is globally valid; this cap
/// just keeps the reported reach finite.
const HALFSPACE_REACH: f64 = 1e6;

/// A truncated domain `V` with boundary `∂V`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DomainRepr", into = "DomainRepr")]
pub enum Domain {
    /// `V = { x : (a, x) < c }` with `a` a unit vector.
    Halfspace {
        axis: Vec<f64>,
        offset: f64,
    },
    /// The cylinder over a centered ball in the first `k` coordinates:
    /// `V = { x : (x_1² + ... + x_k²)^(1/2) < r }`.
    Ball {
        dim: usize,
        k: usize,
        radius: f64,
    },
}

impl Domain {
    /// Builds a halfspace, normalizing `(axis, offset)` so the axis is a unit
    /// vector and `tau` is a true signed distance.
    pub fn halfspace(axis: Vec<f64>, offset: f64) -> Result<Self> {
        if axis.is_empty() {
            return Err(Error::InvalidParameter("halfspace axis is empty".into()));
        }
        if !axis.iter().all(|a| a.is_finite()) || !offset.is_finite() {
            return Err(Error::InvalidParameter(
                "halfspace parameters must be finite".into(),
            ));
        }
        let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("halfspace axis is zero".into()));
        }
        Ok(Domain::Halfspace {
            axis: axis.iter().map(|a| a / norm).collect(),
            offset: offset / norm,
        })
    }

    /// Builds the cylinder over the radius-`r` ball in the first `k` of `dim`
    /// coordinates.
    pub fn ball(dim: usize, k: usize, radius: f64) -> Result<Self> {
        if k < 1 || k > dim {
            return Err(Error::InvalidParameter(format!(
                "ball needs 1 <= k <= dim, got k = {k}, dim = {dim}"
            )));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter("ball radius must be positive".into()));
        }
        Ok(Domain::Ball { dim, k, radius })
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Halfspace { axis, .. } => axis.len(),
            Domain::Ball { dim, .. } => *dim,
        }
    }

    /// How far from the boundary the signed distance (and projection) is valid.
    pub fn reach(&self) -> f64 {
        match self {
            Domain::Halfspace { .. } => HALFSPACE_REACH,
            Domain::Ball { radius, .. } => *radius,
        }
    }

    /// Signed distance to the boundary: negative inside `V`, positive outside.
    /// `None` beyond the reach, where the nearest-boundary geometry degrades
    /// (e.g. near the center of a ball).
    pub fn tau(&self, x: &[f64]) -> Option<f64> {
        self.check_point(x);
        let t = match self {
            Domain::Halfspace { axis, offset } => {
                dot(axis, x) - offset
            }
            Domain::Ball { k, radius, .. } => {
                norm_k(x, *k) - radius
            }
        };
        (t.abs() < self.reach()).then_some(t)
    }

    /// Membership in the open domain; valid everywhere, including beyond reach.
    pub fn contains(&self, x: &[f64]) -> bool {
        self.check_point(x);
        match self {
            Domain::Halfspace { axis, offset } => dot(axis, x) < *offset,
            Domain::Ball { k, radius, .. } => norm_k(x, *k) < *radius,
        }
    }

    /// Nearest boundary point; defined exactly where `tau` is.
    pub fn project(&self, x: &[f64]) -> Option<Vec<f64>> {
        let t = self.tau(x)?;
        let mut y = x.to_vec();
        match self {
            Domain::Halfspace { axis, .. } => {
                for (yi, a) in y.iter_mut().zip(axis) {
                    *yi -= t * a;
                }
            }
            Domain::Ball { k, radius, .. } => {
                let s = norm_k(x, *k);
                // |tau| < reach = r implies s > 0 here.
                let scale = radius / s;
                for yi in y.iter_mut().take(*k) {
                    *yi *= scale;
                }
            }
        }
        Some(y)
    }

    /// Outward unit normal at a boundary point, as a 1-tensor.
    pub fn normal(&self, y: &[f64]) -> AltTensor {
        self.check_point(y);
        let mut n = AltTensor::zero(1);
        match self {
            Domain::Halfspace { axis, .. } => {
                for (p, a) in axis.iter().enumerate() {
                    n.insert(MultiIndex::singleton(p as u32 + 1), *a);
                }
            }
            Domain::Ball { k, .. } => {
                let s = norm_k(y, *k);
                assert!(s > 0.0, "normal undefined at the cylinder core");
                for (p, yp) in y.iter().enumerate().take(*k) {
                    n.insert(MultiIndex::singleton(p as u32 + 1), yp / s);
                }
            }
        }
        n
    }

    /// For halfspaces aligned with a coordinate axis, `(axis_index, sign, offset)`
    /// with `tau(x) = sign · x_axis - offset`. These are the domains whose layer
    /// integrals the quadrature backend evaluates in closed form.
    pub fn canonical_axis(&self) -> Option<(usize, f64, f64)> {
        match self {
            Domain::Halfspace { axis, offset } => {
                let mut hit = None;
                for (p, a) in axis.iter().enumerate() {
                    if *a != 0.0 {
                        if hit.is_some() {
                            return None;
                        }
                        hit = Some((p, *a));
                    }
                }
                let (p, a) = hit?;
                (a.abs() == 1.0).then_some((p, a, *offset))
            }
            Domain::Ball { .. } => None,
        }
    }

    fn check_point(&self, x: &[f64]) {
        assert_eq!(
            x.len(),
            self.dim(),
            "point dimension mismatch with domain"
        );
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm_k(x: &[f64], k: usize) -> f64 {
    x.iter().take(k).map(|v| v * v).sum::<f64>().sqrt()
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum DomainRepr {
    Halfspace { axis: Vec<f64>, offset: f64 },
    Ball { dim: usize, k: usize, r: f64 },
}

impl TryFrom<DomainRepr> for Domain {
    type Error = Error;

    fn try_from(repr: DomainRepr) -> Result<Self> {
        match repr {
            DomainRepr::Halfspace { axis, offset } => Domain::halfspace(axis, offset),
            DomainRepr::Ball { dim, k, r } => Domain::ball(dim, k, r),
        }
    }
}

impl From<Domain> for DomainRepr {
    fn from(d: Domain) -> Self {
        match d {
            Domain::Halfspace { axis, offset } => DomainRepr::Halfspace { axis, offset },
            Domain::Ball { dim, k, radius } => DomainRepr::Ball { dim, k, r: radius },
        }
    }
}
