//! Exterior calculus of differential forms under differentiable (Gaussian) measures.
//!
//! The library works in a truncated model: alternating Hilbert–Schmidt tensors over the
//! first `D` coordinates of a separable Hilbert space, with an orthonormal basis indexed
//! by strictly increasing multi-indices. On top of the sparse tensor algebra
//! ([`exterior`]) sit differential forms with symbolic coefficients ([`forms`]),
//! Gaussian product measures with logarithmic derivatives and form-valued measures
//! ([`measures`]), surface-layer measures and the Stokes-formula machinery
//! ([`surface`]), and the shared integration backends ([`integrate`]). The
//! [`experiment`] module drives everything from JSON configs and is what the `formcalc`
//! binary wraps.

pub mod error;
pub mod exterior;
pub mod forms;
pub mod integrate;
pub mod measures;
pub mod surface;
pub mod experiment;

pub use error::{Error, Result};
pub use exterior::{AltTensor, MultiIndex};
pub use forms::{Expr, FormField};
pub use integrate::{Estimate, Method};
pub use measures::{CoForm, GaussianProduct};
pub use surface::{Domain, Mollifier, MollifierProfile};
