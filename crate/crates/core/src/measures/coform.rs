//! Form-valued measures: a base Gaussian product measure carrying an
//! antisymmetric-tensor density.

use crate::error::{Error, Result};
use crate::exterior::MultiIndex;
use crate::forms::{contract_form, Expr, FormField};
use crate::integrate::{integrate, Estimate, Method};
use crate::measures::GaussianProduct;

/// A measure of codegree `n`: `ω = F · μ` with `F` an `n`-form field and `μ` a
/// Gaussian product measure. Codegree 0 recovers a signed scalar measure.
#[derive(Clone, Debug)]
pub struct CoForm {
    base: GaussianProduct,
    density_form: FormField,
}

impl CoForm {
    pub fn new(base: GaussianProduct, density_form: FormField) -> Result<Self> {
        if density_form.dim() != base.dim() {
            return Err(Error::DimMismatch {
                context: "coform density",
                expected: base.dim(),
                got: density_form.dim(),
            });
        }
        Ok(CoForm { base, density_form })
    }

    /// The plain volume measure `μ` as a codegree-0 coform with density 1.
    pub fn volume(base: GaussianProduct) -> Self {
        let dim = base.dim();
        let density_form = FormField::scalar_field(Expr::constant(1.0), dim)
            .expect("constant density is always valid");
        CoForm { base, density_form }
    }

    pub fn codegree(&self) -> usize {
        self.density_form.degree()
    }

    pub fn base(&self) -> &GaussianProduct {
        &self.base
    }

    pub fn density_form(&self) -> &FormField {
        &self.density_form
    }

    /// For a codegree-0 measure, its scalar density expression.
    pub fn scalar_density(&self) -> Result<Expr> {
        if self.codegree() != 0 {
            return Err(Error::DegreeMismatch {
                context: "scalar density",
                expected: 0,
                got: self.codegree(),
            });
        }
        Ok(self
            .density_form
            .coeff(&MultiIndex::empty())
            .cloned()
            .unwrap_or(Expr::Const(0.0)))
    }

    /// The differential, one codegree lower:
    ///
    /// `dω = (-1)^(n-1) Σ_γ Σ_{p ∈ γ} (∂_p F_γ + F_γ β_p) · (e_p ⌟ e_γ) · μ`
    ///
    /// where `β` is the logarithmic derivative of the base measure. The `β` term is
    /// what makes integration by parts against `μ` boundary-free on the full space.
    pub fn differential(&self) -> Result<CoForm> {
        let n = self.codegree();
        if n == 0 {
            return Err(Error::DegreeMismatch {
                context: "coform differential",
                expected: 1,
                got: 0,
            });
        }
        let sign_total = if (n - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
        let beta = self.base.log_derivative_form();
        let mut entries: Vec<(MultiIndex, Expr)> = Vec::new();
        for (gamma, f_expr) in self.density_form.iter() {
            for p in gamma.iter() {
                let beta_p = beta
                    .coeff(&MultiIndex::singleton(p))
                    .cloned()
                    .expect("log-derivative form has every axis");
                let term = Expr::add(
                    f_expr.differentiate(p),
                    Expr::mul(f_expr.clone(), beta_p),
                );
                let (rest, sign) = gamma
                    .split_with_sign(&MultiIndex::singleton(p))
                    .expect("p is a member of gamma");
                entries.push((rest, Expr::scale(sign_total * sign as f64, term)));
            }
        }
        let density_form = FormField::from_entries(n - 1, self.base.dim(), entries)?;
        Ok(CoForm {
            base: self.base.clone(),
            density_form,
        })
    }

    /// Total mass of a codegree-0 measure: `∫ F dμ`.
    pub fn total_mass(&self, method: &Method) -> Result<Estimate> {
        let density = self.scalar_density()?;
        integrate(&|x: &[f64]| density.eval(x), &self.base, method)
    }
}

/// The wedge of a form field into a coform: `g ∧ (F μ) = (g ⌟ F) μ`, lowering the
/// codegree by `deg(g)`. Requires `deg(g) <= codegree(ω)` and matching dimensions.
pub fn wedge_measure(g: &FormField, omega: &CoForm) -> Result<CoForm> {
    if g.dim() != omega.base.dim() {
        return Err(Error::DimMismatch {
            context: "wedge_measure",
            expected: omega.base.dim(),
            got: g.dim(),
        });
    }
    let density_form = contract_form(g, &omega.density_form)?;
    Ok(CoForm {
        base: omega.base.clone(),
        density_form,
    })
}
