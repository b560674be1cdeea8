//! Differential forms with symbolic coefficients.
//!
//! Coefficient functions live in a closed expression class (polynomials times Gaussian
//! envelopes) so the differential, the codifferential, and contractions by polynomial
//! vector fields are exact symbolic operations — finite differences appear only as a
//! test oracle, never inside the operators.

mod expr;
mod field;

pub use expr::{Expr, Poly1, Quadratic};
pub use field::{contract_form, FormField};
