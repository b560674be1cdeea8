//! Mollified indicators of truncated domains.
//!
//! The profile is the linear ramp `h(τ) = clamp(1/2 - τ/(2ε), 0, 1)`: it is the
//! unique profile that is 1 inside the band, 0 outside it, monotone, and keeps
//! `|h'| <= 1/(2ε)` everywhere — the slope budget that makes the layer-measure
//! comparisons sharp. (Any smoother roll-off that still transitions across the
//! same band must exceed that slope somewhere, by the mean value theorem.)

use crate::error::{Error, Result};
use crate::exterior::AltTensor;
use crate::surface::Domain;

/// The one-dimensional ramp profile at width `ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MollifierProfile {
    epsilon: f64,
}

impl MollifierProfile {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter(
                "mollifier width must be positive and finite".into(),
            ));
        }
        Ok(MollifierProfile { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `h(τ)`: 1 for `τ <= -ε`, 0 for `τ >= ε`, linear in between.
    pub fn value(&self, tau: f64) -> f64 {
        (0.5 - tau / (2.0 * self.epsilon)).clamp(0.0, 1.0)
    }

    /// `h'(τ)`: `-1/(2ε)` strictly inside the band, 0 outside.
    pub fn slope(&self, tau: f64) -> f64 {
        if tau.abs() < self.epsilon {
            -1.0 / (2.0 * self.epsilon)
        } else {
            0.0
        }
    }
}

/// A mollified indicator `h_ε ∘ τ` of a domain: 1 deep inside, 0 deep outside,
/// ramping across the boundary band of width `2ε`.
#[derive(Clone, Debug)]
pub struct Mollifier {
    domain: Domain,
    profile: MollifierProfile,
}

impl Mollifier {
    pub fn new(domain: &Domain, epsilon: f64) -> Result<Self> {
        let profile = MollifierProfile::new(epsilon)?;
        if epsilon >= domain.reach() {
            return Err(Error::InvalidParameter(format!(
                "mollifier width {epsilon} exceeds the domain reach {}",
                domain.reach()
            )));
        }
        Ok(Mollifier {
            domain: domain.clone(),
            profile,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.profile.epsilon()
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn profile(&self) -> &MollifierProfile {
        &self.profile
    }

    /// `f_ε(x)`. Points beyond the signed-distance reach are resolved by
    /// membership: they are far from the boundary, where the mollifier is flat.
    pub fn value(&self, x: &[f64]) -> f64 {
        match self.domain.tau(x) {
            Some(t) => self.profile.value(t),
            None => {
                if self.domain.contains(x) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// `∇f_ε(x)` as a 1-tensor: `h'(τ(x)) · n(P x)` inside the band, zero
    /// elsewhere (including beyond reach, where the mollifier is constant).
    pub fn gradient(&self, x: &[f64]) -> AltTensor {
        if let Some(t) = self.domain.tau(x) {
            if t.abs() < self.epsilon() {
                let y = self
                    .domain
                    .project(x)
                    .expect("projection is defined wherever tau is");
                return self.domain.normal(&y).scale(self.profile.slope(t));
            }
        }
        AltTensor::zero(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::MultiIndex;
    use approx::assert_relative_eq;

    fn halfspace_x1() -> Domain {
        Domain::halfspace(vec![1.0, 0.0], 0.0).unwrap()
    }

    #[test]
    fn profile_values_pin_the_ramp() {
        let p = MollifierProfile::new(0.1).unwrap();
        assert_eq!(p.value(-0.2), 1.0);
        assert_eq!(p.value(0.2), 0.0);
        assert_eq!(p.value(0.0), 0.5);
        assert_relative_eq!(p.value(-0.05), 0.75);
        assert_relative_eq!(p.value(0.05), 0.25);
        assert_eq!(p.slope(0.0), -5.0);
        assert_eq!(p.slope(0.1), 0.0);
        assert_eq!(p.slope(-0.1), 0.0);
    }

    #[test]
    fn slope_budget_holds_everywhere() {
        for eps in [0.01, 0.1, 0.5] {
            let p = MollifierProfile::new(eps).unwrap();
            let cap = (1.0 / (2.0 * eps)) * (1.0 + 1e-12);
            let mut t = -2.0 * eps;
            while t <= 2.0 * eps {
                assert!(p.slope(t).abs() <= cap, "slope violated at τ = {t}");
                assert!((0.0..=1.0).contains(&p.value(t)));
                t += eps / 64.0;
            }
        }
    }

    #[test]
    fn slope_matches_finite_differences_inside_band() {
        let p = MollifierProfile::new(0.2).unwrap();
        let h = 1e-7;
        for t in [-0.15, -0.05, 0.0, 0.11] {
            let fd = (p.value(t + h) - p.value(t - h)) / (2.0 * h);
            assert_relative_eq!(p.slope(t), fd, epsilon = 1e-6);
        }
    }

    #[test]
    fn mollifier_on_halfspace() {
        let m = Mollifier::new(&halfspace_x1(), 0.1).unwrap();
        assert_eq!(m.value(&[-1.0, 3.0]), 1.0);
        assert_eq!(m.value(&[1.0, 3.0]), 0.0);
        assert_eq!(m.value(&[0.0, -2.0]), 0.5);
        let g = m.gradient(&[0.05, 0.0]);
        assert_relative_eq!(g.get(&MultiIndex::singleton(1)), -5.0);
        assert!(m.gradient(&[0.2, 0.0]).is_zero());
    }

    #[test]
    fn mollifier_flat_beyond_ball_reach() {
        let b = Domain::ball(2, 2, 1.0).unwrap();
        let m = Mollifier::new(&b, 0.2).unwrap();
        // The cylinder core is beyond reach but deep inside.
        assert_eq!(m.value(&[0.0, 0.0]), 1.0);
        assert!(m.gradient(&[0.0, 0.0]).is_zero());
        // On the wall itself the ramp is half way.
        assert_eq!(m.value(&[1.0, 0.0]), 0.5);
        let g = m.gradient(&[0.0, 0.9]);
        assert_relative_eq!(g.get(&MultiIndex::singleton(2)), -1.0 / 0.4);
    }

    #[test]
    fn pointwise_convergence_to_indicator() {
        let d = halfspace_x1();
        for x in [[-0.3, 1.0], [0.3, -1.0]] {
            let want = if d.contains(&x) { 1.0 } else { 0.0 };
            let mut eps = 0.4;
            let mut last_gap = f64::INFINITY;
            for _ in 0..6 {
                let m = Mollifier::new(&d, eps).unwrap();
                let gap = (m.value(&x) - want).abs();
                assert!(gap <= last_gap);
                last_gap = gap;
                eps /= 2.0;
            }
            assert_eq!(last_gap, 0.0);
        }
    }

    #[test]
    fn width_must_fit_the_reach() {
        let b = Domain::ball(2, 2, 0.5).unwrap();
        assert!(Mollifier::new(&b, 0.5).is_err());
        assert!(Mollifier::new(&b, 0.4).is_ok());
        assert!(MollifierProfile::new(0.0).is_err());
        assert!(MollifierProfile::new(-0.5).is_err());
    }
}
