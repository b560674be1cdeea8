//! Sparse exterior algebra over the truncated coordinate space.
//!
//! Basis alternating tensors are indexed by strictly increasing multi-indices
//! `(i_1 < ... < i_n)` of 1-based coordinates; a general element is a finite linear
//! combination stored sparsely. The Hilbert–Schmidt inner product makes that basis
//! orthonormal, so norms and pairings reduce to coefficient arithmetic.

mod multi_index;
mod tensor;

pub use multi_index::MultiIndex;
pub use tensor::AltTensor;

/// Binomial coefficient as `f64` (exact for every case the norm bounds need).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}
