//! The graded algebra `AS(n,d) = S(n,d) ⊕ S⁻(n,d)`.
//!
//! A product `xy` is the composite operator: the matrix of `xy` is the matrix
//! of `x` times the matrix of `y` on `F[B(n,d)]`. For basis graphs this means
//! the upper vertices of the left factor meet the lower vertices of the right
//! factor, and `Γ_{S,U}` appears in `Γ₁Γ₂` with the (signed) number of middle
//! configurations `T` with `Γ_{S,T} = Γ₁` and `Γ_{T,U} = Γ₂`.

mod checks;
mod element;
mod involution;
mod rect;
mod table;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::enumerate::{contingency_tables, representative_pair};
use crate::error::{Error, Result};
use crate::graph::{permutation_sign, Multigraph, SimpleGraph};

pub use checks::{delta_check, factorization_check, CheckReport};
pub use element::{element_field, identity, multiply, GradedElement};
pub use involution::{anti_involution, involution_sign};
pub use rect::rect_compose;
pub use table::{ParityCase, StructureTable, TableSummary};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// `ξ_Γ` or `ζ_Γ`. Even symbols sort before odd ones.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisSymbol {
    Even(Multigraph),
    Odd(SimpleGraph),
}

impl BasisSymbol {
    /// `ζ_Γ` when `odd`, after checking that `g` is simple.
    pub fn new(parity: Parity, g: Multigraph) -> Result<Self> {
        Ok(match parity {
            Parity::Even => BasisSymbol::Even(g),
            Parity::Odd => BasisSymbol::Odd(SimpleGraph::new(g)?),
        })
    }

    pub fn parity(&self) -> Parity {
        match self {
            BasisSymbol::Even(_) => Parity::Even,
            BasisSymbol::Odd(_) => Parity::Odd,
        }
    }

    pub fn graph(&self) -> &Multigraph {
        match self {
            BasisSymbol::Even(g) => g,
            BasisSymbol::Odd(g) => g.as_multigraph(),
        }
    }

    /// `n` for square symbols.
    pub fn n(&self) -> usize {
        self.graph().n_up()
    }

    pub fn d(&self) -> usize {
        self.graph().degree()
    }

    pub(crate) fn check_shape(&self, n: usize, d: usize) -> Result<()> {
        let g = self.graph();
        if g.n_up() != n || g.n_down() != n || g.degree() != d {
            return Err(Error::shape(format!(
                "{self:?} is not a basis graph of ({n},{d})"
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisSymbol::Even(g) => write!(f, "ξ{g}"),
            BasisSymbol::Odd(g) => write!(f, "ζ{g}"),
        }
    }
}

impl fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Integer structure constants of `b1 · b2` (square case), computed by
/// convolution over the middle configuration at one representative pair per
/// candidate target.
pub fn structure_constants(b1: &BasisSymbol, b2: &BasisSymbol) -> Result<BTreeMap<BasisSymbol, i64>> {
    let (n, d) = (b1.n(), b1.d());
    b1.check_shape(n, d)?;
    b2.check_shape(n, d)?;
    let target = b1.parity().combine(b2.parity());
    let raw = convolve(b1.graph(), b1.parity().is_odd(), b2.graph(), b2.parity().is_odd())?;
    raw.into_iter()
        .map(|(g, c)| Ok((BasisSymbol::new(target, g)?, c)))
        .collect()
}

/// Signed count of middle configurations for possibly rectangular graphs.
/// `g1.n_up()` must equal `g2.n_down()`; targets have `g2.n_up()` upper and
/// `g1.n_down()` lower vertices. Odd factors contribute `ε(γ)`.
pub(crate) fn convolve(
    g1: &Multigraph,
    odd1: bool,
    g2: &Multigraph,
    odd2: bool,
) -> Result<BTreeMap<Multigraph, i64>> {
    if g1.n_up() != g2.n_down() {
        return Err(Error::shape(format!(
            "cannot compose: left factor has {} upper vertices, right factor {} lower",
            g1.n_up(),
            g2.n_down()
        )));
    }
    if g1.degree() != g2.degree() {
        return Err(Error::shape(format!(
            "degrees differ: {} and {}",
            g1.degree(),
            g2.degree()
        )));
    }
    if (odd1 && !g1.is_simple()) || (odd2 && !g2.is_simple()) {
        return Err(Error::InvalidGraph("odd factor is not simple".into()));
    }
    let mut out = BTreeMap::new();
    if g1.upper_degrees() != g2.lower_degrees() {
        return Ok(out);
    }
    let cap = if odd1 != odd2 { 1 } else { g1.degree() };
    let idx1 = odd1.then(|| standard_index(g1));
    let idx2 = odd2.then(|| standard_index(g2));
    for target in contingency_tables(&g2.upper_degrees(), &g1.lower_degrees(), cap) {
        let c = middle_count(&target, g1, g2, idx1.as_deref(), idx2.as_deref());
        if c != 0 {
            out.insert(target, c);
        }
    }
    Ok(out)
}

pub(crate) fn standard_index(g: &Multigraph) -> Vec<usize> {
    let mut next = 0;
    g.flat()
        .iter()
        .map(|&m| {
            let here = next;
            next += m as usize;
            here
        })
        .collect()
}

/// `Σ_T w₁(S,T) w₂(T,U)` over `T` with `Γ_{S,T} = g1`, `Γ_{T,U} = g2`, where
/// `(S,U)` is the representative pair of `target`.
fn middle_count(
    target: &Multigraph,
    g1: &Multigraph,
    g2: &Multigraph,
    idx1: Option<&[usize]>,
    idx2: Option<&[usize]>,
) -> i64 {
    let (s, u) = representative_pair(target);
    let m = g1.n_up();
    let d = target.degree();
    struct Search<'a> {
        s: &'a [usize],
        u: &'a [usize],
        m: usize,
        n1: usize,
        quota1: Vec<u32>,
        used2: Vec<u32>,
        g2: &'a [u32],
        t: Vec<usize>,
        idx1: Option<&'a [usize]>,
        idx2: Option<&'a [usize]>,
        total: i64,
    }
    impl Search<'_> {
        fn run(&mut self, k: usize) {
            if k == self.s.len() {
                let mut w = 1;
                if let Some(idx) = self.idx1 {
                    let p: Vec<usize> = (0..k).map(|b| idx[self.t[b] * self.n1 + self.s[b]]).collect();
                    w *= permutation_sign(&p);
                }
                if let Some(idx) = self.idx2 {
                    let p: Vec<usize> = (0..k).map(|b| idx[self.u[b] * self.m + self.t[b]]).collect();
                    w *= permutation_sign(&p);
                }
                self.total += w;
                return;
            }
            let j = self.s[k];
            let up = self.u[k];
            for i in 0..self.m {
                let q = i * self.n1 + j;
                let e = up * self.m + i;
                if self.quota1[q] == 0 || self.used2[e] >= self.g2[e] {
                    continue;
                }
                self.quota1[q] -= 1;
                self.used2[e] += 1;
                self.t[k] = i;
                self.run(k + 1);
                self.quota1[q] += 1;
                self.used2[e] -= 1;
            }
        }
    }
    let mut search = Search {
        s: s.as_slice(),
        u: u.as_slice(),
        m,
        n1: g1.n_down(),
        quota1: g1.flat().to_vec(),
        used2: vec![0; g2.flat().len()],
        g2: g2.flat(),
        t: vec![0; d],
        idx1,
        idx2,
        total: 0,
    };
    search.run(0);
    search.total
}
