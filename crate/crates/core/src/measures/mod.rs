//! Measures on the truncated space: Gaussian product base measures with their
//! logarithmic derivatives, form-valued measures of a given codegree, and the
//! integral operators built on them (pairings, norms, the measure-adjoint
//! differential, and the product-rule checker).

mod coform;
mod gaussian;
mod ops;

pub use coform::{wedge_measure, CoForm};
pub use gaussian::GaussianProduct;
pub use ops::{
    adjoint_check, dstar, leibniz_check, lp_norm, pairing, sobolev_norm, AdjointReport,
    LeibnizReport, Region,
};
