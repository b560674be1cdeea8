//! Degree-n differential forms as fields of alternating tensors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{AltTensor, MultiIndex};
use crate::forms::Expr;

/// A differential form of degree `n` over the first `dim` coordinates: a sparse map
/// from multi-indices to symbolic coefficient functions, `f = Σ_γ f_γ e_γ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FormFieldRepr", into = "FormFieldRepr")]
pub struct FormField {
    degree: usize,
    dim: usize,
    coeffs: BTreeMap<MultiIndex, Expr>,
}

impl FormField {
    /// The zero form of the given degree over `dim` coordinates.
    pub fn zero(degree: usize, dim: usize) -> Self {
        FormField {
            degree,
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    /// A constant form with the given tensor value.
    pub fn constant(value: &AltTensor, dim: usize) -> Result<Self> {
        let entries = value
            .iter()
            .map(|(idx, c)| (idx.clone(), Expr::constant(c)));
        FormField::from_entries(value.degree(), dim, entries)
    }

    /// A scalar (degree-0) field from a single expression.
    pub fn scalar_field(expr: Expr, dim: usize) -> Result<Self> {
        FormField::from_entries(0, dim, [(MultiIndex::empty(), expr)])
    }

    /// Builds a form from `(index, coefficient)` pairs, validating degrees and the
    /// coordinate truncation (both index entries and expression coordinates must be
    /// ≤ `dim`). Duplicate indices accumulate; exact-zero coefficients are dropped.
    pub fn from_entries(
        degree: usize,
        dim: usize,
        entries: impl IntoIterator<Item = (MultiIndex, Expr)>,
    ) -> Result<Self> {
        let mut form = FormField::zero(degree, dim);
        for (idx, expr) in entries {
            if idx.len() != degree {
                return Err(Error::DegreeMismatch {
                    context: "form entry key length",
                    expected: degree,
                    got: idx.len(),
                });
            }
            if idx.max_entry().is_some_and(|m| m as usize > dim) {
                return Err(Error::InvalidIndex(format!(
                    "{idx} exceeds the coordinate truncation D = {dim}"
                )));
            }
            if expr.max_coord() as usize > dim {
                return Err(Error::DimMismatch {
                    context: "coefficient expression coordinate",
                    expected: dim,
                    got: expr.max_coord() as usize,
                });
            }
            form.accumulate(idx, expr);
        }
        Ok(form)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient expression at `idx`, if present.
    pub fn coeff(&self, idx: &MultiIndex) -> Option<&Expr> {
        self.coeffs.get(idx)
    }

    /// Iterates `(index, coefficient)` entries in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Expr)> {
        self.coeffs.iter()
    }

    fn accumulate(&mut self, idx: MultiIndex, expr: Expr) {
        use std::collections::btree_map::Entry;
        if expr.is_zero() {
            return;
        }
        match self.coeffs.entry(idx) {
            Entry::Vacant(slot) => {
                slot.insert(expr);
            }
            Entry::Occupied(mut slot) => {
                let combined = Expr::add(slot.get().clone(), expr);
                if combined.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = combined;
                }
            }
        }
    }

    /// Pointwise value `f(x)`.
    pub fn evaluate(&self, x: &[f64]) -> Result<AltTensor> {
        if x.len() != self.dim {
            return Err(Error::DimMismatch {
                context: "evaluation point",
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut out = AltTensor::zero(self.degree);
        for (idx, expr) in self.iter() {
            out.insert(idx.clone(), expr.eval(x));
        }
        Ok(out)
    }

    /// Scales every coefficient by a constant.
    pub fn scale(&self, a: f64) -> FormField {
        let mut out = FormField::zero(self.degree, self.dim);
        for (idx, expr) in self.iter() {
            out.accumulate(idx.clone(), Expr::scale(a, expr.clone()));
        }
        out
    }

    /// Coefficientwise sum; degrees and dims must match.
    pub fn add(&self, other: &FormField) -> Result<FormField> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                context: "form addition",
                expected: self.degree,
                got: other.degree,
            });
        }
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                context: "form addition",
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut out = self.clone();
        for (idx, expr) in other.iter() {
            out.accumulate(idx.clone(), expr.clone());
        }
        Ok(out)
    }

    /// The exterior differential `df = Σ_{γ, p∉γ} (∂_p f_γ) e_p ∧ e_γ`, a symbolic
    /// degree-`n+1` form. Directions range over the truncation `1..=dim`.
    pub fn differential(&self) -> FormField {
        let mut out = FormField::zero(self.degree + 1, self.dim);
        for (idx, expr) in self.iter() {
            for p in 1..=self.dim as u32 {
                if idx.contains(p) {
                    continue;
                }
                let d = expr.differentiate(p);
                if d.is_zero() {
                    continue;
                }
                let (merged, sign) = MultiIndex::singleton(p)
                    .merge_with_sign(idx)
                    .expect("p not in idx, merge cannot overlap");
                out.accumulate(merged, Expr::scale(sign as f64, d));
            }
        }
        out
    }

    /// The codifferential `δf = Σ_{γ, p∈γ} (∂_p f_γ) e_p ⌟ e_γ`, a symbolic
    /// degree-`n−1` form. Rejects degree 0 (no direction lies in the empty index).
    pub fn codifferential(&self) -> Result<FormField> {
        if self.degree == 0 {
            return Err(Error::DegreeMismatch {
                context: "codifferential needs degree >= 1",
                expected: 1,
                got: 0,
            });
        }
        let mut out = FormField::zero(self.degree - 1, self.dim);
        for (idx, expr) in self.iter() {
            for p in idx.iter() {
                let d = expr.differentiate(p);
                if d.is_zero() {
                    continue;
                }
                let (rest, sign) = idx
                    .split_with_sign(&MultiIndex::singleton(p))
                    .expect("p in idx, split cannot fail");
                out.accumulate(rest, Expr::scale(sign as f64, d));
            }
        }
        Ok(out)
    }
}

/// Pointwise interior product of fields, `(g ⌟ f)(x) = g(x) ⌟ f(x)`, carried out
/// symbolically so the result is again a [`FormField`].
///
/// `g` has degree `m ≤ n = f.degree`; the result has degree `n − m`. This backs both
/// contraction by vector fields (`m = 1`, e.g. the logarithmic derivative) and the
/// mixed wedge of a form with a form-valued measure.
pub fn contract_form(g: &FormField, f: &FormField) -> Result<FormField> {
    if g.degree() > f.degree() {
        return Err(Error::DegreeMismatch {
            context: "field contraction needs degree(g) <= degree(f)",
            expected: f.degree(),
            got: g.degree(),
        });
    }
    if g.dim() != f.dim() {
        return Err(Error::DimMismatch {
            context: "field contraction",
            expected: f.dim(),
            got: g.dim(),
        });
    }
    let mut out = FormField::zero(f.degree() - g.degree(), f.dim());
    for (idx_g, eg) in g.iter() {
        for (idx_f, ef) in f.iter() {
            if let Some((rest, sign)) = idx_f.split_with_sign(idx_g) {
                out.accumulate(
                    rest,
                    Expr::scale(sign as f64, Expr::mul(eg.clone(), ef.clone())),
                );
            }
        }
    }
    Ok(out)
}

/// Wire format: `{"degree": n, "dim": D, "coeffs": [{"idx": [...], "expr": <tree>}]}`.
#[derive(Serialize, Deserialize)]
struct FormFieldRepr {
    degree: usize,
    dim: usize,
    coeffs: Vec<FormEntryRepr>,
}

#[derive(Serialize, Deserialize)]
struct FormEntryRepr {
    idx: Vec<u32>,
    expr: Expr,
}

impl TryFrom<FormFieldRepr> for FormField {
    type Error = Error;

    fn try_from(repr: FormFieldRepr) -> Result<Self> {
        FormField::from_entries(
            repr.degree,
            repr.dim,
            repr.coeffs
                .into_iter()
                .map(|e| MultiIndex::new(e.idx).map(|idx| (idx, e.expr)))
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

impl From<FormField> for FormFieldRepr {
    fn from(f: FormField) -> Self {
        FormFieldRepr {
            degree: f.degree,
            dim: f.dim,
            coeffs: f
                .coeffs
                .into_iter()
                .map(|(idx, expr)| FormEntryRepr {
                    idx: idx.as_slice().to_vec(),
                    expr,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(entries: &[u32]) -> MultiIndex {
        MultiIndex::new(entries.to_vec()).unwrap()
    }

    fn e_basis(entries: &[u32]) -> AltTensor {
        AltTensor::basis(mi(entries))
    }

    #[test]
    fn evaluate_substitutes_coordinates() {
        // f = x1·e(2)
        let f = FormField::from_entries(1, 2, [(mi(&[2]), Expr::coord(1))]).unwrap();
        assert_eq!(f.evaluate(&[3.0, 0.0]).unwrap(), e_basis(&[2]).scale(3.0));

        // constant e(1)
        let c = FormField::constant(&e_basis(&[1]), 2).unwrap();
        assert_eq!(c.evaluate(&[9.0, -4.0]).unwrap(), e_basis(&[1]));

        // f = x1 x2 · e(1,2)
        let f = FormField::from_entries(
            2,
            2,
            [(mi(&[1, 2]), Expr::mul(Expr::coord(1), Expr::coord(2)))],
        )
        .unwrap();
        assert_eq!(
            f.evaluate(&[2.0, 5.0]).unwrap(),
            e_basis(&[1, 2]).scale(10.0)
        );
        assert!(f.evaluate(&[1.0]).is_err());
    }

    #[test]
    fn differential_of_coordinate_is_gradient() {
        // f = x2 as a 0-form over D = 2: df = e(2)
        let f = FormField::scalar_field(Expr::coord(2), 2).unwrap();
        let df = f.differential();
        assert_eq!(df.degree(), 1);
        assert_eq!(df.evaluate(&[0.3, -1.0]).unwrap(), e_basis(&[2]));
    }

    #[test]
    fn differential_picks_up_merge_sign() {
        // f = x2·e(1) over D = 2: df = (∂2 x2) e2∧e1 = −e(1,2)
        let f = FormField::from_entries(1, 2, [(mi(&[1]), Expr::coord(2))]).unwrap();
        let df = f.differential();
        assert_eq!(df.evaluate(&[0.0, 0.0]).unwrap(), e_basis(&[1, 2]).scale(-1.0));
    }

    #[test]
    fn differential_skips_directions_inside_the_index() {
        // f = x1·e(1) over D = 3: the only varying direction is excluded
        let f = FormField::from_entries(1, 3, [(mi(&[1]), Expr::coord(1))]).unwrap();
        assert!(f.differential().is_zero());
    }

    #[test]
    fn codifferential_examples() {
        // f = x1·e(1): δf = 1
        let f = FormField::from_entries(1, 2, [(mi(&[1]), Expr::coord(1))]).unwrap();
        let d = f.codifferential().unwrap();
        assert_eq!(d.evaluate(&[4.0, 5.0]).unwrap(), AltTensor::scalar(1.0));

        // f = x2·e(1,2): p = 2 term gives (∂2 x2)·(e2 ⌟ e(1,2)) = −e(1)
        let f = FormField::from_entries(2, 2, [(mi(&[1, 2]), Expr::coord(2))]).unwrap();
        let d = f.codifferential().unwrap();
        assert_eq!(d.evaluate(&[0.0, 0.0]).unwrap(), e_basis(&[1]).scale(-1.0));

        // constant coefficients: δf = 0
        let f = FormField::constant(&e_basis(&[1, 2]), 2).unwrap();
        assert!(f.codifferential().unwrap().is_zero());

        // degree 0 rejected
        let f = FormField::scalar_field(Expr::coord(1), 1).unwrap();
        assert!(f.codifferential().is_err());
    }

    #[test]
    fn contract_form_examples() {
        // constant e(1) against e(1,2) -> e(2)
        let g = FormField::constant(&e_basis(&[1]), 2).unwrap();
        let f = FormField::constant(&e_basis(&[1, 2]), 2).unwrap();
        let out = contract_form(&g, &f).unwrap();
        assert_eq!(out.evaluate(&[0.0, 0.0]).unwrap(), e_basis(&[2]));

        // x1·e(1) against e(1) -> x1 as a 0-form
        let g = FormField::from_entries(1, 1, [(mi(&[1]), Expr::coord(1))]).unwrap();
        let f = FormField::constant(&AltTensor::basis(mi(&[1])), 1).unwrap();
        let out = contract_form(&g, &f).unwrap();
        assert_eq!(out.evaluate(&[7.0]).unwrap(), AltTensor::scalar(7.0));

        // β(x) = −x over D = 2 against e(1,2) -> −x1·e(2) + x2·e(1)
        let beta = FormField::from_entries(
            1,
            2,
            [
                (mi(&[1]), Expr::neg(Expr::coord(1))),
                (mi(&[2]), Expr::neg(Expr::coord(2))),
            ],
        )
        .unwrap();
        let f = FormField::constant(&e_basis(&[1, 2]), 2).unwrap();
        let out = contract_form(&beta, &f).unwrap();
        let value = out.evaluate(&[0.5, 2.0]).unwrap();
        assert_eq!(value.get(&mi(&[2])), -0.5);
        assert_eq!(value.get(&mi(&[1])), 2.0);

        // degree mismatch rejected
        assert!(contract_form(&f, &beta).is_err());
    }

    #[test]
    fn d_squared_is_zero_on_a_handpicked_form() {
        let f = FormField::from_entries(
            1,
            3,
            [
                (mi(&[1]), Expr::mul(Expr::coord(2), Expr::coord(3))),
                (mi(&[2]), Expr::mul(Expr::coord(1), Expr::coord(1))),
            ],
        )
        .unwrap();
        let ddf = f.differential().differential();
        for x in [[0.1, -0.4, 2.0], [1.0, 1.0, 1.0]] {
            assert!(ddf.evaluate(&x).unwrap().max_abs_coeff() <= 1e-15);
        }
    }

    #[test]
    fn truncation_is_enforced() {
        assert!(FormField::from_entries(1, 2, [(mi(&[3]), Expr::constant(1.0))]).is_err());
        assert!(FormField::from_entries(1, 2, [(mi(&[1]), Expr::coord(3))]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = FormField::from_entries(
            1,
            2,
            [
                (mi(&[1]), Expr::coord(2)),
                (mi(&[2]), Expr::scale(2.0, Expr::coord(1))),
            ],
        )
        .unwrap();
        let json = serde_json::to_string(&f).unwrap();
        let back: FormField = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
