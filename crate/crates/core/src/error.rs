//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by algebra, measure, domain, integration and config code.
#[derive(Debug, Error)]
pub enum Error {
    /// An operand had a different degree than the operation requires.
    #[error("degree mismatch: {context} (expected {expected}, got {got})")]
    DegreeMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// An operand lives over a different coordinate truncation.
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// A multi-index was not strictly increasing, contained 0, or exceeded the truncation.
    #[error("invalid multi-index: {0}")]
    InvalidIndex(String),

    /// Invalid construction parameter (variance, radius, epsilon, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The logarithmic derivative is undefined where the density vanishes.
    #[error("logarithmic derivative undefined: density is zero at the given point")]
    ZeroDensity,

    /// The requested operation has no quadrature path (Monte Carlo is available).
    #[error("quadrature unsupported: {0}")]
    UnsupportedQuadrature(String),

    /// Experiment configuration failed validation.
    #[error("config error: {0}")]
    Config(String),

    /// I/O while reading configs or writing reports.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization of configs, fixtures or reports.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
