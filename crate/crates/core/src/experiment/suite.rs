//! Seeded random fixtures and the exact-algebra property suite.
//!
//! Everything here is a pure function of an explicit ChaCha8 generator, so the
//! suites the runner executes (and the acceptance tests replay) are reproducible
//! bit-for-bit from a seed alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exterior::{binomial, AltTensor, MultiIndex};
use crate::forms::{Expr, FormField};

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_coeff(rng: &mut impl Rng) -> f64 {
    rng.random_range(-2.0..2.0)
}

/// A uniformly random strictly increasing multi-index of the given length.
pub fn random_multi_index(rng: &mut impl Rng, degree: usize, dim: usize) -> MultiIndex {
    assert!(degree <= dim, "degree cannot exceed the dimension");
    let mut pool: Vec<u32> = (1..=dim as u32).collect();
    for i in 0..degree {
        let j = rng.random_range(i..pool.len());
        pool.swap(i, j);
    }
    let mut picked = pool[..degree].to_vec();
    picked.sort_unstable();
    MultiIndex::new(picked).expect("sampled indices are distinct and sorted")
}

/// A sparse random tensor with up to `nnz` entries and coefficients in [-2, 2).
pub fn random_tensor(rng: &mut impl Rng, degree: usize, dim: usize, nnz: usize) -> AltTensor {
    let mut t = AltTensor::zero(degree);
    for _ in 0..nnz {
        t.insert(random_multi_index(rng, degree, dim), random_coeff(rng));
    }
    t
}

/// A random polynomial expression: a constant plus `terms` monomials of degree
/// up to `max_degree` in the first `dim` coordinates.
pub fn random_poly_expr(
    rng: &mut impl Rng,
    dim: usize,
    max_degree: usize,
    terms: usize,
) -> Expr {
    let mut acc = Expr::constant(random_coeff(rng));
    for _ in 0..terms {
        let deg = rng.random_range(0..=max_degree);
        let mut term = Expr::constant(random_coeff(rng));
        for _ in 0..deg {
            term = Expr::mul(term, Expr::coord(rng.random_range(1..=dim as u32)));
        }
        acc = Expr::add(acc, term);
    }
    acc
}

/// A random form field with polynomial coefficients on a few random indices.
pub fn random_form(
    rng: &mut impl Rng,
    degree: usize,
    dim: usize,
    poly_degree: usize,
) -> FormField {
    let supports = rng.random_range(1..=2usize);
    let entries: Vec<(MultiIndex, Expr)> = (0..supports)
        .map(|_| {
            (
                random_multi_index(rng, degree, dim),
                random_poly_expr(rng, dim, poly_degree, 2),
            )
        })
        .collect();
    FormField::from_entries(degree, dim, entries).expect("sampled entries are valid")
}

/// Outcome of the exact-algebra suite: the adjunction identity and the wedge and
/// contraction norm bounds over seeded random triples.
#[derive(Clone, Debug, Serialize)]
pub struct AlgebraSuiteReport {
    pub triples: usize,
    /// Largest `|⟨g⌟f, h⟩ - ⟨f, g∧h⟩| / max(1, |lhs|, |rhs|)` observed.
    pub max_adjunction_gap: f64,
    pub wedge_bound_violations: usize,
    pub contraction_bound_violations: usize,
    /// Largest observed ratio of `‖f∧g‖²` to its bound `C(m+n, n)·‖f‖²·‖g‖²`.
    pub max_wedge_ratio: f64,
    /// Largest observed ratio of `‖g⌟f‖²` to its bound `C(m, n)·‖g‖²·‖f‖²`.
    pub max_contraction_ratio: f64,
}

/// Runs the exact-algebra suite: for each triple, a random dimension in 3..=8,
/// `g` of degree `n ≤ 2`, `f` of degree `m = n + (0..=2)`, `h` of degree `m - n`.
pub fn algebra_suite(seed: u64, triples: usize) -> AlgebraSuiteReport {
    let mut rng = rng_for(seed);
    let mut report = AlgebraSuiteReport {
        triples,
        max_adjunction_gap: 0.0,
        wedge_bound_violations: 0,
        contraction_bound_violations: 0,
        max_wedge_ratio: 0.0,
        max_contraction_ratio: 0.0,
    };
    for _ in 0..triples {
        let dim = rng.random_range(3..=8usize);
        let n = rng.random_range(0..=2usize);
        let m = (n + rng.random_range(0..=2usize)).min(dim);
        let nnz_f = rng.random_range(1..=4);
        let f = random_tensor(&mut rng, m, dim, nnz_f);
        let nnz_g = rng.random_range(1..=4);
        let g = random_tensor(&mut rng, n, dim, nnz_g);
        let nnz_h = rng.random_range(1..=4);
        let h = random_tensor(&mut rng, m - n, dim, nnz_h);

        // Adjunction: ⟨g⌟f, h⟩ = ⟨f, g∧h⟩.
        let lhs = g
            .contract(&f)
            .expect("degrees chosen compatible")
            .inner(&h)
            .expect("degrees match");
        let rhs = f.inner(&g.wedge(&h)).expect("degrees match");
        let gap = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0);
        report.max_adjunction_gap = report.max_adjunction_gap.max(gap);

        // Norm bounds (exact constants, no slack factor).
        let hs_f = f.hs_norm_sq();
        let hs_g = g.hs_norm_sq();
        let wedge_sq = f.wedge(&g).hs_norm_sq();
        let wedge_bound = binomial(m + n, n) * hs_f * hs_g;
        if wedge_sq > wedge_bound * (1.0 + 1e-12) {
            report.wedge_bound_violations += 1;
        }
        if wedge_bound > 0.0 {
            report.max_wedge_ratio = report.max_wedge_ratio.max(wedge_sq / wedge_bound);
        }
        let contract_sq = g.contract(&f).expect("degrees compatible").hs_norm_sq();
        let contract_bound = binomial(m, n) * hs_g * hs_f;
        if contract_sq > contract_bound * (1.0 + 1e-12) {
            report.contraction_bound_violations += 1;
        }
        if contract_bound > 0.0 {
            report.max_contraction_ratio = report
                .max_contraction_ratio
                .max(contract_sq / contract_bound);
        }
    }
    report
}
