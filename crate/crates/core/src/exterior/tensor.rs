//! Sparse alternating Hilbert–Schmidt tensors.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::MultiIndex;

/// A finitely supported element of the degree-`n` alternating tensor space, stored as
/// a sparse map from multi-indices to coefficients.
///
/// The basis tensors `e_γ` are orthonormal under the Hilbert–Schmidt inner product, so
/// [`AltTensor::inner`] and [`AltTensor::hs_norm`] are plain coefficient sums. The map
/// keeps no explicit zero entries (exact `0.0` is pruned; there is no epsilon pruning —
/// numerical tolerances belong to the integration layer, not the algebra).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AltTensorRepr", into = "AltTensorRepr")]
pub struct AltTensor {
    degree: usize,
    coeffs: BTreeMap<MultiIndex, f64>,
}

impl AltTensor {
    /// The zero tensor of the given degree.
    pub fn zero(degree: usize) -> Self {
        AltTensor {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The unit basis tensor `e_γ`; degree is the index length.
    pub fn basis(idx: MultiIndex) -> Self {
        let degree = idx.len();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(idx, 1.0);
        AltTensor { degree, coeffs }
    }

    /// A degree-0 tensor holding a scalar.
    pub fn scalar(value: f64) -> Self {
        let mut t = AltTensor::zero(0);
        t.insert(MultiIndex::empty(), value);
        t
    }

    /// Builds a tensor from `(index, coefficient)` pairs, validating key lengths.
    /// Duplicate indices accumulate.
    pub fn from_entries(
        degree: usize,
        entries: impl IntoIterator<Item = (MultiIndex, f64)>,
    ) -> Result<Self> {
        let mut t = AltTensor::zero(degree);
        for (idx, c) in entries {
            if idx.len() != degree {
                return Err(Error::DegreeMismatch {
                    context: "tensor entry key length",
                    expected: degree,
                    got: idx.len(),
                });
            }
            if !c.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "non-finite coefficient {c} at index {idx}"
                )));
            }
            t.accumulate(idx, c);
        }
        Ok(t)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient at `idx` (0.0 when absent).
    pub fn get(&self, idx: &MultiIndex) -> f64 {
        self.coeffs.get(idx).copied().unwrap_or(0.0)
    }

    /// Sets the coefficient at `idx`, pruning exact zeros. Panics on key-length mismatch
    /// (construction through [`AltTensor::from_entries`] reports it as an error instead).
    pub fn insert(&mut self, idx: MultiIndex, c: f64) {
        assert_eq!(idx.len(), self.degree, "tensor entry key length");
        if c == 0.0 {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, c);
        }
    }

    fn accumulate(&mut self, idx: MultiIndex, c: f64) {
        use std::collections::btree_map::Entry;
        if c == 0.0 {
            return;
        }
        match self.coeffs.entry(idx) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                let next = *slot.get() + c;
                if next == 0.0 {
                    slot.remove();
                } else {
                    *slot.get_mut() = next;
                }
            }
        }
    }

    /// Iterates entries in canonical (lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.coeffs.iter().map(|(k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of stored (nonzero) coefficients.
    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    /// Largest coordinate index used, if any.
    pub fn max_entry(&self) -> Option<u32> {
        self.coeffs.keys().filter_map(|k| k.max_entry()).max()
    }

    pub fn scale(&self, a: f64) -> Self {
        let mut out = AltTensor::zero(self.degree);
        for (idx, c) in self.iter() {
            out.insert(idx.clone(), a * c);
        }
        out
    }

    /// Exterior product. Total: overlapping index pairs simply contribute nothing.
    /// Degree-0 operands act as scalar multiplication.
    pub fn wedge(&self, other: &AltTensor) -> AltTensor {
        let mut out = AltTensor::zero(self.degree + other.degree);
        for (idx_f, cf) in self.iter() {
            for (idx_g, cg) in other.iter() {
                if let Some((merged, sign)) = idx_f.merge_with_sign(idx_g) {
                    out.accumulate(merged, sign as f64 * cf * cg);
                }
            }
        }
        out
    }

    /// Interior product `self ⌟ f`, the adjoint of wedging by `self`:
    /// `inner(self ⌟ f, h) = inner(f, self ∧ h)` for every `h`.
    ///
    /// Requires `self.degree ≤ f.degree`; the result has degree `f.degree − self.degree`.
    pub fn contract(&self, f: &AltTensor) -> Result<AltTensor> {
        if self.degree > f.degree {
            return Err(Error::DegreeMismatch {
                context: "contraction needs degree(g) <= degree(f)",
                expected: f.degree,
                got: self.degree,
            });
        }
        let mut out = AltTensor::zero(f.degree - self.degree);
        for (idx_g, cg) in self.iter() {
            for (idx_f, cf) in f.iter() {
                if let Some((rest, sign)) = idx_f.split_with_sign(idx_g) {
                    out.accumulate(rest, sign as f64 * cg * cf);
                }
            }
        }
        Ok(out)
    }

    /// Hilbert–Schmidt inner product; degrees must match.
    pub fn inner(&self, other: &AltTensor) -> Result<f64> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                context: "inner product",
                expected: self.degree,
                got: other.degree,
            });
        }
        // Walk the smaller support, look up in the larger.
        let (small, large) = if self.nnz() <= other.nnz() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = 0.0;
        for (idx, c) in small.iter() {
            acc += c * large.get(idx);
        }
        Ok(acc)
    }

    pub fn hs_norm_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c * c).sum()
    }

    pub fn hs_norm(&self) -> f64 {
        self.hs_norm_sq().sqrt()
    }

    /// Largest absolute coefficient (0 for the zero tensor); handy for exactness tests.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl Add<&AltTensor> for &AltTensor {
    type Output = AltTensor;

    fn add(self, rhs: &AltTensor) -> AltTensor {
        assert_eq!(self.degree, rhs.degree, "tensor addition degree mismatch");
        let mut out = self.clone();
        for (idx, c) in rhs.iter() {
            out.accumulate(idx.clone(), c);
        }
        out
    }
}

impl Sub<&AltTensor> for &AltTensor {
    type Output = AltTensor;

    fn sub(self, rhs: &AltTensor) -> AltTensor {
        assert_eq!(self.degree, rhs.degree, "tensor subtraction degree mismatch");
        let mut out = self.clone();
        for (idx, c) in rhs.iter() {
            out.accumulate(idx.clone(), -c);
        }
        out
    }
}

impl Neg for &AltTensor {
    type Output = AltTensor;

    fn neg(self) -> AltTensor {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &AltTensor {
    type Output = AltTensor;

    fn mul(self, a: f64) -> AltTensor {
        self.scale(a)
    }
}

impl fmt::Display for AltTensor {
    /// Prints e.g. `2 e(1,2) - e(2,3)`; degree-0 tensors print their scalar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (idx, c)) in self.iter().enumerate() {
            if k == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else if c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if a != 1.0 || idx.is_empty() {
                write!(f, "{a}")?;
                if !idx.is_empty() {
                    write!(f, " ")?;
                }
            }
            if !idx.is_empty() {
                write!(f, "e{idx}")?;
            }
        }
        Ok(())
    }
}

/// Wire format: `{"degree": n, "coeffs": [{"idx": [i1,...], "c": x}, ...]}`.
#[derive(Serialize, Deserialize)]
struct AltTensorRepr {
    degree: usize,
    coeffs: Vec<EntryRepr>,
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    idx: Vec<u32>,
    c: f64,
}

impl TryFrom<AltTensorRepr> for AltTensor {
    type Error = Error;

    fn try_from(repr: AltTensorRepr) -> Result<Self> {
        AltTensor::from_entries(
            repr.degree,
            repr.coeffs
                .into_iter()
                .map(|e| MultiIndex::new(e.idx).map(|idx| (idx, e.c)))
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

impl From<AltTensor> for AltTensorRepr {
    fn from(t: AltTensor) -> Self {
        AltTensorRepr {
            degree: t.degree,
            coeffs: t
                .iter()
                .map(|(idx, c)| EntryRepr {
                    idx: idx.as_slice().to_vec(),
                    c,
                })
                .collect(),
        }
    }
}
