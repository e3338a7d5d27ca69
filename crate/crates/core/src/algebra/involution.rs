use super::{BasisSymbol, GradedElement};
use crate::graph::{labelling_sign, standard_labelling, Labelling, SimpleGraph};
use crate::scalar::Scalar;

/// `ε(Γ*, l₀*)`: sign of the reflected standard labelling of `Γ` as a
/// labelling of `Γ*`.
pub fn involution_sign(g: &SimpleGraph) -> i64 {
    let reflected = Labelling::new(
        standard_labelling(g)
            .edges()
            .iter()
            .map(|&(i, j)| (j, i))
            .collect(),
    );
    labelling_sign(&g.star(), &reflected).expect("reflection labels the reflected graph")
}

/// `ξ_Γ ↦ ξ_{Γ*}`, `ζ_Γ ↦ ε(Γ*, l₀*) ζ_{Γ*}`, extended linearly.
pub fn anti_involution<F: Scalar>(x: &GradedElement<F>) -> GradedElement<F> {
    let mut out = GradedElement::zero(x.n(), x.d());
    for (b, c) in x.terms() {
        match b {
            BasisSymbol::Even(g) => out.add_term(BasisSymbol::Even(g.star()), c.clone()),
            BasisSymbol::Odd(g) => {
                let s = F::from_i64(involution_sign(g));
                out.add_term(BasisSymbol::Odd(g.star()), c.clone() * s);
            }
        }
    }
    out
}
