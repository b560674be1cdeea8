//! The closed coefficient-function class: expression trees over constants, coordinates,
//! sums, products, scalar multiples and exponentials of quadratics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A quadratic polynomial `c + Σ b_p·x_p + Σ a_{pq}·x_p·x_q` (indices 1-based, `p ≤ q`
/// in the quadratic terms). Used as the exponent of [`Expr::ExpQuad`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quadratic {
    #[serde(default)]
    pub constant: f64,
    /// Terms `(p, b_p)`.
    #[serde(default)]
    pub linear: Vec<(u32, f64)>,
    /// Terms `(p, q, a_pq)` with `p ≤ q`.
    #[serde(default)]
    pub quadratic: Vec<(u32, u32, f64)>,
}

impl Quadratic {
    fn eval(&self, x: &[f64]) -> f64 {
        let coord = |p: u32| x[(p - 1) as usize];
        let mut acc = self.constant;
        for &(p, b) in &self.linear {
            acc += b * coord(p);
        }
        for &(p, q, a) in &self.quadratic {
            acc += a * coord(p) * coord(q);
        }
        acc
    }

    /// The partial derivative in direction `p`, as an affine expression.
    fn derivative(&self, dir: u32) -> Expr {
        let mut acc = Expr::constant(0.0);
        for &(p, b) in &self.linear {
            if p == dir {
                acc = Expr::add(acc, Expr::constant(b));
            }
        }
        for &(p, q, a) in &self.quadratic {
            if p == dir && q == dir {
                acc = Expr::add(acc, Expr::scale(2.0 * a, Expr::coord(dir)));
            } else if p == dir {
                acc = Expr::add(acc, Expr::scale(a, Expr::coord(q)));
            } else if q == dir {
                acc = Expr::add(acc, Expr::scale(a, Expr::coord(p)));
            }
        }
        acc
    }

    fn max_coord(&self) -> u32 {
        let lin = self.linear.iter().map(|&(p, _)| p).max().unwrap_or(0);
        let quad = self
            .quadratic
            .iter()
            .map(|&(p, q, _)| p.max(q))
            .max()
            .unwrap_or(0);
        lin.max(quad)
    }

    fn involves(&self, dir: u32) -> bool {
        self.linear.iter().any(|&(p, _)| p == dir)
            || self.quadratic.iter().any(|&(p, q, _)| p == dir || q == dir)
    }

    fn validate(&self) -> Result<()> {
        let ok_idx = |p: u32| p >= 1;
        if !self.linear.iter().all(|&(p, _)| ok_idx(p)) {
            return Err(Error::InvalidParameter(
                "expquad linear term with 0 index (indices are 1-based)".into(),
            ));
        }
        if !self.quadratic.iter().all(|&(p, q, _)| ok_idx(p) && p <= q) {
            return Err(Error::InvalidParameter(
                "expquad quadratic term must have 1 <= p <= q".into(),
            ));
        }
        Ok(())
    }
}

/// A univariate polynomial by coefficient list, `p(t) = Σ coeffs[k]·t^k`.
///
/// Produced by [`Expr::axis_poly`] when an expression is partially evaluated along one
/// coordinate axis; consumed by the exact axis-quadrature in the integration layer.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly1(pub Vec<f64>);

impl Poly1 {
    pub fn constant(c: f64) -> Self {
        Poly1(vec![c])
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn add(&self, other: &Poly1) -> Poly1 {
        let mut out = vec![0.0; self.0.len().max(other.0.len())];
        for (k, &c) in self.0.iter().enumerate() {
            out[k] += c;
        }
        for (k, &c) in other.0.iter().enumerate() {
            out[k] += c;
        }
        Poly1(out)
    }

    pub fn mul(&self, other: &Poly1) -> Poly1 {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly1(vec![]);
        }
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly1(out)
    }

    pub fn scale(&self, a: f64) -> Poly1 {
        Poly1(self.0.iter().map(|&c| a * c).collect())
    }

    /// `p(a·t + b)` as a polynomial in `t` (Horner-style expansion).
    pub fn compose_affine(&self, a: f64, b: f64) -> Poly1 {
        let affine = Poly1(vec![b, a]);
        let mut out = Poly1(vec![]);
        for &c in self.0.iter().rev() {
            out = out.mul(&affine).add(&Poly1::constant(c));
        }
        out
    }
}

/// A coefficient function: an expression tree closed under exact differentiation.
///
/// Build with the smart constructors ([`Expr::add`], [`Expr::mul`], ...) which fold
/// constants and drop exact zero/one factors, keeping derivative trees small.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExprRepr", into = "ExprRepr")]
pub enum Expr {
    Const(f64),
    /// The coordinate `x_p`, 1-based.
    Coord(u32),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Scale(f64, Box<Expr>),
    /// `exp(q(x))` for a quadratic `q`; derivative is `q'_p(x)·exp(q(x))`, so the class
    /// stays closed. Quadratic (not higher) exponents keep Gaussian integrals finite.
    ExpQuad(Quadratic),
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn coord(p: u32) -> Expr {
        assert!(p >= 1, "coordinate indices are 1-based");
        Expr::Coord(p)
    }

    /// Smart constructor for sums (folds constants, drops zero operands); not
    /// an operator impl because `Expr` values are consumed, not borrowed.
    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
            (Expr::Const(0.0), b) => b,
            (a, Expr::Const(0.0)) => a,
            (a, b) => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    /// Smart constructor for products (folds constants into [`Expr::scale`]).
    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
            (Expr::Const(x), _) | (_, Expr::Const(x)) if x == 0.0 => Expr::Const(0.0),
            (Expr::Const(1.0), b) => b,
            (a, Expr::Const(1.0)) => a,
            (Expr::Const(x), b) => Expr::scale(x, b),
            (a, Expr::Const(y)) => Expr::scale(y, a),
            (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn scale(a: f64, e: Expr) -> Expr {
        if a == 0.0 {
            return Expr::Const(0.0);
        }
        if a == 1.0 {
            return e;
        }
        match e {
            Expr::Const(c) => Expr::Const(a * c),
            Expr::Scale(b, inner) => Expr::Scale(a * b, inner),
            e => Expr::Scale(a, Box::new(e)),
        }
    }

    /// Smart constructor for negation, via [`Expr::scale`].
    #[allow(clippy::should_implement_trait)]
    pub fn neg(e: Expr) -> Expr {
        Expr::scale(-1.0, e)
    }

    /// `exp(q(x))`; validates the quadratic's index bookkeeping.
    pub fn exp_quad(q: Quadratic) -> Result<Expr> {
        q.validate()?;
        Ok(Expr::ExpQuad(q))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == 0.0)
    }

    /// Evaluates at a point; `x` must cover every coordinate the expression uses.
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Coord(p) => x[(p - 1) as usize],
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Scale(a, e) => a * e.eval(x),
            Expr::ExpQuad(q) => q.eval(x).exp(),
        }
    }

    /// Exact directional derivative value `∂_p self (x)` (no symbolic tree is built).
    pub fn deriv(&self, p: u32, x: &[f64]) -> f64 {
        match self {
            Expr::Const(_) => 0.0,
            Expr::Coord(q) => {
                if *q == p {
                    1.0
                } else {
                    0.0
                }
            }
            Expr::Add(a, b) => a.deriv(p, x) + b.deriv(p, x),
            Expr::Mul(a, b) => a.deriv(p, x) * b.eval(x) + a.eval(x) * b.deriv(p, x),
            Expr::Scale(a, e) => a * e.deriv(p, x),
            Expr::ExpQuad(q) => q.derivative(p).eval(x) * q.eval(x).exp(),
        }
    }

    /// Exact symbolic partial derivative `∂_p self`.
    pub fn differentiate(&self, p: u32) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Coord(q) => Expr::Const(if *q == p { 1.0 } else { 0.0 }),
            Expr::Add(a, b) => Expr::add(a.differentiate(p), b.differentiate(p)),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.differentiate(p), (**b).clone()),
                Expr::mul((**a).clone(), b.differentiate(p)),
            ),
            Expr::Scale(a, e) => Expr::scale(*a, e.differentiate(p)),
            Expr::ExpQuad(q) => Expr::mul(q.derivative(p), Expr::ExpQuad(q.clone())),
        }
    }

    /// Largest coordinate index used (0 for constants).
    pub fn max_coord(&self) -> u32 {
        match self {
            Expr::Const(_) => 0,
            Expr::Coord(p) => *p,
            Expr::Add(a, b) | Expr::Mul(a, b) => a.max_coord().max(b.max_coord()),
            Expr::Scale(_, e) => e.max_coord(),
            Expr::ExpQuad(q) => q.max_coord(),
        }
    }

    /// Partially evaluates along `axis`: every other coordinate is taken from `x`, and
    /// the result is the univariate polynomial in `x_axis`.
    ///
    /// Returns an error when the expression is not polynomial along the axis (an
    /// exponential envelope involving it); the exact axis-quadrature cannot apply then.
    pub fn axis_poly(&self, axis: u32, x: &[f64]) -> Result<Poly1> {
        Ok(match self {
            Expr::Const(c) => Poly1::constant(*c),
            Expr::Coord(p) => {
                if *p == axis {
                    Poly1(vec![0.0, 1.0])
                } else {
                    Poly1::constant(x[(*p - 1) as usize])
                }
            }
            Expr::Add(a, b) => a.axis_poly(axis, x)?.add(&b.axis_poly(axis, x)?),
            Expr::Mul(a, b) => a.axis_poly(axis, x)?.mul(&b.axis_poly(axis, x)?),
            Expr::Scale(a, e) => e.axis_poly(axis, x)?.scale(*a),
            Expr::ExpQuad(q) => {
                if q.involves(axis) {
                    return Err(Error::UnsupportedQuadrature(format!(
                        "exponential coefficient depends on axis {axis}"
                    )));
                }
                Poly1::constant(q.eval(x).exp())
            }
        })
    }
}

/// Wire format for expression trees. `add`/`mul` are n-ary in JSON for fixture
/// readability and fold into the binary tree on load.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ExprRepr {
    Const {
        value: f64,
    },
    Coord {
        p: u32,
    },
    Add {
        terms: Vec<ExprRepr>,
    },
    Mul {
        factors: Vec<ExprRepr>,
    },
    Scale {
        factor: f64,
        inner: Box<ExprRepr>,
    },
    ExpQuad {
        #[serde(default)]
        constant: f64,
        #[serde(default)]
        linear: Vec<(u32, f64)>,
        #[serde(default)]
        quadratic: Vec<(u32, u32, f64)>,
    },
}

impl TryFrom<ExprRepr> for Expr {
    type Error = Error;

    fn try_from(repr: ExprRepr) -> Result<Expr> {
        Ok(match repr {
            ExprRepr::Const { value } => Expr::Const(value),
            ExprRepr::Coord { p } => {
                if p == 0 {
                    return Err(Error::InvalidParameter(
                        "coord node with p = 0 (indices are 1-based)".into(),
                    ));
                }
                Expr::Coord(p)
            }
            ExprRepr::Add { terms } => terms
                .into_iter()
                .map(Expr::try_from)
                .try_fold(Expr::Const(0.0), |acc, t| Ok::<_, Error>(Expr::add(acc, t?)))?,
            ExprRepr::Mul { factors } => factors
                .into_iter()
                .map(Expr::try_from)
                .try_fold(Expr::Const(1.0), |acc, t| Ok::<_, Error>(Expr::mul(acc, t?)))?,
            ExprRepr::Scale { factor, inner } => Expr::scale(factor, Expr::try_from(*inner)?),
            ExprRepr::ExpQuad {
                constant,
                linear,
                quadratic,
            } => Expr::exp_quad(Quadratic {
                constant,
                linear,
                quadratic,
            })?,
        })
    }
}

impl From<Expr> for ExprRepr {
    fn from(e: Expr) -> ExprRepr {
        match e {
            Expr::Const(value) => ExprRepr::Const { value },
            Expr::Coord(p) => ExprRepr::Coord { p },
            Expr::Add(a, b) => {
                // Flatten nested sums for readable fixtures.
                let mut terms = Vec::new();
                let mut stack = vec![*b, *a];
                while let Some(e) = stack.pop() {
                    match e {
                        Expr::Add(a, b) => {
                            stack.push(*b);
                            stack.push(*a);
                        }
                        other => terms.push(ExprRepr::from(other)),
                    }
                }
                ExprRepr::Add { terms }
            }
            Expr::Mul(a, b) => ExprRepr::Mul {
                factors: vec![ExprRepr::from(*a), ExprRepr::from(*b)],
            },
            Expr::Scale(factor, inner) => ExprRepr::Scale {
                factor,
                inner: Box::new(ExprRepr::from(*inner)),
            },
            Expr::ExpQuad(q) => ExprRepr::ExpQuad {
                constant: q.constant,
                linear: q.linear,
                quadratic: q.quadratic,
            },
        }
    }
}
