use serde::Serialize;

use super::element::{basis_product, table_within_budget};
use super::{BasisSymbol, GradedElement};
use crate::enumerate::enum_m;
use crate::error::{Error, Result};
use crate::graph::{d_of, gamma_lambda, u_of, Multigraph, SimpleGraph};
use crate::scalar::Rational;

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub subject: String,
    pub passed: bool,
    pub detail: Option<String>,
}

impl CheckReport {
    fn new(name: &str, subject: String) -> Self {
        CheckReport {
            name: name.into(),
            subject,
            passed: true,
            detail: None,
        }
    }

    fn fail(&mut self, detail: String) {
        if self.passed {
            self.passed = false;
            self.detail = Some(detail);
        }
    }
}

fn square_n_ge_d(g: &Multigraph) -> Result<(usize, usize)> {
    let (n, d) = (g.n_up(), g.degree());
    if g.n_down() != n {
        return Err(Error::shape("graph must be square"));
    }
    if n < d {
        return Err(Error::RequiresNAtLeastD { n, d });
    }
    Ok((n, d))
}

/// Checks `ζ_Γ = ξ_{U(Γ)} ζ_{Γ_{λ₀}} ξ_{D(Γ)}`, `ζ_Γ = ζ_{U(Γ)} ξ_{D(Γ)}` and
/// `ζ_Γ = ξ_{U(Γ)} ζ_{D(Γ)}` with `λ₀ = (1^d, 0^{n-d})`.
pub fn factorization_check(g: &SimpleGraph) -> Result<CheckReport> {
    let (n, d) = square_n_ge_d(g)?;
    let u = u_of(g)?.into_multigraph();
    let dg = d_of(g)?.into_multigraph();
    let lambda0 = gamma_lambda(&vec![1; d], n)?;
    type E = GradedElement<Rational>;
    let zeta = |h: &Multigraph| E::zeta(SimpleGraph::new(h.clone())?);
    let target = E::zeta(g.clone())?;
    let xi_u = E::xi(u.clone())?;
    let xi_d = E::xi(dg.clone())?;
    let candidates = [
        (
            "xi_U zeta_L0 xi_D",
            xi_u.multiply(&E::zeta(lambda0)?)?.multiply(&xi_d)?,
        ),
        ("zeta_U xi_D", zeta(&u)?.multiply(&xi_d)?),
        ("xi_U zeta_D", xi_u.multiply(&zeta(&dg)?)?),
    ];
    let mut report = CheckReport::new("factorization", g.to_string());
    for (name, value) in candidates {
        if value != target {
            report.fail(format!("{name} = {value:?}, expected {target:?}"));
        }
    }
    Ok(report)
}

/// Checks that the coefficient of `ζ_{U(Γ)}` in `ξ_{Γ'} ζ_{D(Γ)*}` is `δ_{Γ',Γ}`
/// for every `Γ' ∈ M(n,d)`.
pub fn delta_check(g: &Multigraph) -> Result<CheckReport> {
    let (n, d) = square_n_ge_d(g)?;
    let target = BasisSymbol::Odd(u_of(g)?);
    let right = BasisSymbol::Odd(d_of(g)?.star());
    let table = table_within_budget(n, d);
    let mut report = CheckReport::new("delta", g.to_string());
    for other in enum_m(n, d) {
        let consts = basis_product(table.as_deref(), &BasisSymbol::Even(other.clone()), &right)?;
        let c = consts.get(&target).copied().unwrap_or(0);
        let want = i64::from(&other == g);
        if c != want {
            report.fail(format!("coefficient {c} for Γ' = {other}, expected {want}"));
        }
    }
    Ok(report)
}
