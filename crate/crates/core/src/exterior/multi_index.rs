//! Strictly increasing multi-indices labelling the alternating basis.

use std::fmt;

use crate::error::{Error, Result};

/// A strictly increasing sequence of 1-based coordinate indices `(i_1 < ... < i_n)`.
///
/// The empty index labels the scalar (degree-0) basis element. Multi-indices order
/// lexicographically, which gives every sparse tensor a canonical entry order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    /// The empty multi-index (degree 0).
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    /// A single coordinate `(p)`; `p` is 1-based.
    pub fn singleton(p: u32) -> Self {
        assert!(p >= 1, "coordinate indices are 1-based");
        MultiIndex(vec![p])
    }

    /// Builds a multi-index, validating strict increase and 1-based entries.
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.first().is_some_and(|&first| first == 0) {
            return Err(Error::InvalidIndex(format!(
                "{entries:?}: coordinate indices are 1-based"
            )));
        }
        if entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndex(format!(
                "{entries:?}: entries must be strictly increasing"
            )));
        }
        Ok(MultiIndex(entries))
    }

    /// Builds a multi-index from entries in any order, returning the sort parity.
    ///
    /// Returns `None` when two entries coincide (the alternating basis element is 0).
    /// The parity is +1/-1 according to the permutation that sorts the input.
    pub fn from_unsorted(mut entries: Vec<u32>) -> Option<(Self, i32)> {
        // Insertion sort with transposition count; inputs are tiny.
        let mut swaps = 0usize;
        for i in 1..entries.len() {
            let mut j = i;
            while j > 0 && entries[j - 1] > entries[j] {
                entries.swap(j - 1, j);
                swaps += 1;
                j -= 1;
            }
        }
        if entries.windows(2).any(|w| w[0] == w[1]) || entries.first() == Some(&0) {
            return None;
        }
        let sign = if swaps.is_multiple_of(2) { 1 } else { -1 };
        Some((MultiIndex(entries), sign))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, p: u32) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    /// Largest entry, if any; bounds the coordinate truncation a tensor needs.
    pub fn max_entry(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// Merges two disjoint multi-indices into their sorted union with the sign of the
    /// interleaving permutation: `e_self ∧ e_other = sign · e_merged`.
    ///
    /// Returns `None` when the indices overlap (the wedge of the basis elements is 0).
    /// The sign is `(-1)^k` where `k` counts the pairs `(a ∈ self, b ∈ other)` with
    /// `a > b`, i.e. the inversions of the concatenation `self ++ other`.
    pub fn merge_with_sign(&self, other: &MultiIndex) -> Option<(MultiIndex, i32)> {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0usize, 0usize);
        let mut inversions = 0usize;
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    // b[j] jumps over every element still waiting in `a`.
                    inversions += a.len() - i;
                    out.push(b[j]);
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Some((MultiIndex(out), sign))
    }

    /// Splits `self` as the disjoint union `sub ∪ rest`, returning `rest` and the sign
    /// with which `sub` contracts: `e_sub ⌟ e_self = sign · e_rest`, i.e. the merge sign
    /// of `(sub, rest)`.
    ///
    /// Returns `None` when `sub` is not a subset of `self`.
    pub fn split_with_sign(&self, sub: &MultiIndex) -> Option<(MultiIndex, i32)> {
        if sub.0.len() > self.0.len() {
            return None;
        }
        let mut rest = Vec::with_capacity(self.0.len() - sub.0.len());
        let mut taken = 0usize; // entries of `sub` consumed so far
        let mut inversions = 0usize;
        for &e in &self.0 {
            if taken < sub.0.len() && sub.0[taken] == e {
                taken += 1;
            } else {
                // Every not-yet-consumed element of `sub` exceeds `e` (both sorted),
                // so each contributes one inversion against this `rest` element.
                inversions += sub.0.len() - taken;
                rest.push(e);
            }
        }
        if taken < sub.0.len() {
            return None;
        }
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Some((MultiIndex(rest), sign))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl<'a> IntoIterator for &'a MultiIndex {
    type Item = u32;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, u32>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}
