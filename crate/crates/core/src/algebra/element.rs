use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{structure_constants, BasisSymbol, Parity, StructureTable};
use crate::enumerate::{enum_lambda, Budget};
use crate::error::{Error, Result};
use crate::graph::{gamma0_lambda, Multigraph, SimpleGraph};
use crate::scalar::{FieldSpec, Scalar};

/// A finite combination of basis symbols of `AS(n,d)` over `F`. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedElement<F> {
    n: usize,
    d: usize,
    terms: BTreeMap<BasisSymbol, F>,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    n: usize,
    d: usize,
    field: FieldSpec,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    parity: Parity,
    adj: Vec<Vec<u32>>,
    coeff: String,
}

#[derive(Deserialize)]
struct FieldOnly {
    field: FieldSpec,
}

/// The field named in an element JSON document, read before choosing `F`.
pub fn element_field(json: &str) -> Result<FieldSpec> {
    Ok(serde_json::from_str::<FieldOnly>(json)?.field)
}

/// Table for `(n,d)` when it fits the budget from the environment.
pub(crate) fn table_within_budget(n: usize, d: usize) -> Option<Arc<StructureTable>> {
    let budget = Budget::from_env();
    if budget.check_basis(n, d).is_err() || budget.check_configs(n, d).is_err() {
        return None;
    }
    StructureTable::get(n, d).ok()
}

/// Structure constants of `a · b`, from the table when it fits the budget.
pub(crate) fn basis_product(
    table: Option<&StructureTable>,
    a: &BasisSymbol,
    b: &BasisSymbol,
) -> Result<BTreeMap<BasisSymbol, i64>> {
    match table {
        Some(t) => t.constants(a, b),
        None => structure_constants(a, b),
    }
}

impl<F: Scalar> GradedElement<F> {
    pub fn zero(n: usize, d: usize) -> Self {
        GradedElement {
            n,
            d,
            terms: BTreeMap::new(),
        }
    }

    /// The basis element `b`; `n` and `d` are read off its graph.
    pub fn basis(b: BasisSymbol) -> Result<Self> {
        let (n, d) = (b.n(), b.d());
        b.check_shape(n, d)?;
        let mut terms = BTreeMap::new();
        terms.insert(b, F::one());
        Ok(GradedElement { n, d, terms })
    }

    pub fn xi(g: Multigraph) -> Result<Self> {
        GradedElement::basis(BasisSymbol::Even(g))
    }

    pub fn zeta(g: SimpleGraph) -> Result<Self> {
        GradedElement::basis(BasisSymbol::Odd(g))
    }

    pub fn from_terms(n: usize, d: usize, terms: impl IntoIterator<Item = (BasisSymbol, F)>) -> Result<Self> {
        let mut x = GradedElement::zero(n, d);
        for (b, c) in terms {
            b.check_shape(n, d)?;
            x.add_term(b, c);
        }
        Ok(x)
    }

    /// Image of integer structure constants in `F`.
    pub fn from_integers(n: usize, d: usize, terms: &BTreeMap<BasisSymbol, i64>) -> Result<Self> {
        GradedElement::from_terms(n, d, terms.iter().map(|(b, &c)| (b.clone(), F::from_i64(c))))
    }

    pub(crate) fn add_term(&mut self, b: BasisSymbol, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&b) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(b, s);
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> FieldSpec {
        F::field()
    }

    pub fn terms(&self) -> &BTreeMap<BasisSymbol, F> {
        &self.terms
    }

    pub fn coeff(&self, b: &BasisSymbol) -> F {
        self.terms.get(b).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The parity if every term has the same one (`None` for zero or mixed).
    pub fn homogeneous_parity(&self) -> Option<Parity> {
        let mut parities = self.terms.keys().map(BasisSymbol::parity);
        let first = parities.next()?;
        parities.all(|p| p == first).then_some(first)
    }

    pub fn part(&self, parity: Parity) -> Self {
        GradedElement {
            n: self.n,
            d: self.d,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.parity() == parity)
                .map(|(b, c)| (b.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if (self.n, self.d) != (other.n, other.d) {
            return Err(Error::shape(format!(
                "elements of AS({},{}) and AS({},{})",
                self.n, self.d, other.n, other.d
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = GradedElement::zero(self.n, self.d);
        for (b, x) in &self.terms {
            out.add_term(b.clone(), x.clone() * c.clone());
        }
        out
    }

    /// The product `self · other` (composition of operators, `self` applied last).
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = GradedElement::zero(self.n, self.d);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        let table = table_within_budget(self.n, self.d);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let consts = basis_product(table.as_deref(), a, b)?;
                let cab = ca.clone() * cb.clone();
                for (t, c) in consts {
                    out.add_term(t, cab.clone() * F::from_i64(c));
                }
            }
        }
        Ok(out)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let json = ElementJson {
            n: self.n,
            d: self.d,
            field: F::field(),
            terms: self
                .terms
                .iter()
                .map(|(b, c)| TermJson {
                    parity: b.parity(),
                    adj: b.graph().rows(),
                    coeff: c.to_canonical(),
                })
                .collect(),
        };
        serde_json::to_value(json).expect("element serialises")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("element serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let json: ElementJson = serde_json::from_str(s)?;
        if json.field != F::field() {
            return Err(Error::FieldMismatch {
                expected: F::field(),
                found: json.field,
            });
        }
        let mut x = GradedElement::zero(json.n, json.d);
        for term in json.terms {
            let g = if term.adj.is_empty() {
                Multigraph::zero(0, 0)
            } else {
                Multigraph::from_rows(&term.adj)?
            };
            let b = BasisSymbol::new(term.parity, g)?;
            b.check_shape(json.n, json.d)?;
            x.add_term(b, F::parse_canonical(&term.coeff)?);
        }
        Ok(x)
    }
}

impl<F: Scalar> fmt::Debug for GradedElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| format!("{}·{b:?}", c.to_canonical()))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<F: Scalar> fmt::Display for GradedElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `1 = Σ_λ ξ_{Γ⁰_λ}`.
pub fn identity<F: Scalar>(n: usize, d: usize) -> GradedElement<F> {
    let mut x = GradedElement::zero(n, d);
    for lambda in enum_lambda(n, d) {
        let g = gamma0_lambda(&lambda, n).expect("λ has n parts");
        x.add_term(BasisSymbol::Even(g), F::one());
    }
    x
}

/// `x · y`.
pub fn multiply<F: Scalar>(x: &GradedElement<F>, y: &GradedElement<F>) -> Result<GradedElement<F>> {
    x.multiply(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Gf5, Rational};

    fn xi(rows: &[Vec<u32>]) -> GradedElement<Rational> {
        GradedElement::xi(Multigraph::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn worked_product_element() {
        let p = xi(&[vec![2, 0], vec![1, 1]])
            .multiply(&xi(&[vec![2, 1], vec![0, 1]]))
            .unwrap();
        let want = xi(&[vec![3, 0], vec![0, 1]])
            .scale(&Rational::from_i64(3))
            .add(&xi(&[vec![2, 1], vec![1, 0]]))
            .unwrap();
        assert_eq!(p, want);
    }

    #[test]
    fn identity_instances() {
        let one = identity::<Rational>(2, 2);
        let want = xi(&[vec![2, 0], vec![0, 0]])
            .add(&xi(&[vec![1, 0], vec![0, 1]]))
            .unwrap()
            .add(&xi(&[vec![0, 0], vec![0, 2]]))
            .unwrap();
        assert_eq!(one, want);
        assert_eq!(identity::<Rational>(1, 4), xi(&[vec![4]]));
        for g in crate::enumerate::enum_n(2, 2) {
            let z = GradedElement::<Rational>::zeta(g).unwrap();
            assert_eq!(one.multiply(&z).unwrap(), z);
            assert_eq!(z.multiply(&one).unwrap(), z);
        }
    }

    #[test]
    fn mismatched_shapes_fail() {
        let a = xi(&[vec![2, 0], vec![0, 0]]);
        let b = xi(&[vec![3, 0], vec![0, 0]]);
        assert!(matches!(a.multiply(&b), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn json_roundtrip_and_field_check() {
        let x = xi(&[vec![2, 0], vec![1, 1]]).scale(&Rational::new(5.into(), 3.into()));
        let s = x.to_json();
        assert!(s.contains(r#""coeff":"5/3""#));
        assert!(s.contains(r#""field":"Q""#));
        assert_eq!(GradedElement::<Rational>::from_json(&s).unwrap(), x);
        assert_eq!(element_field(&s).unwrap(), FieldSpec::Rationals);
        assert!(matches!(
            GradedElement::<Gf5>::from_json(&s),
            Err(Error::FieldMismatch { .. })
        ));
        let bad = r#"{"n":2,"d":2,"field":"Q","terms":[{"parity":"odd","adj":[[2,0],[0,0]],"coeff":"1/1"}]}"#;
        assert!(GradedElement::<Rational>::from_json(bad).is_err());
    }
}
