//! Basis elements as explicit integral operators on `F[B(n,d)]`.
//!
//! Rows and columns are indexed by `B(n,d)` in odometer order. The entry at
//! `(S,T)` of `ξ_Γ` is `[Γ_{S,T} = Γ]`, that of `ζ_Γ` is `ε(γ_{S,T})[Γ_{S,T} = Γ]`.
//! Nothing here reads the structure-constant code paths except
//! [`verify_table`], which compares the two.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{BasisSymbol, GradedElement, Parity, ParityCase, StructureTable};
use crate::enumerate::{enum_m, enum_n, representative_pair, Budget};
use crate::error::{Error, Result};
use crate::graph::{pair_sign, permutation_sign, BallsConfig, Multigraph};
use crate::linalg::{ExactMatrix, SparseEchelon};
use crate::scalar::{FieldSpec, Scalar};

/// An operator on `F[B(n,d)]` stored densely.
#[derive(Clone, PartialEq, Eq)]
pub struct OperatorMatrix<F> {
    n: usize,
    d: usize,
    matrix: ExactMatrix<F>,
}

impl<F: Scalar> std::fmt::Debug for OperatorMatrix<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "OperatorMatrix(n={}, d={}, {:?})", self.n, self.d, self.matrix)
    }
}

fn config_count(n: usize, d: usize) -> usize {
    n.pow(d as u32)
}

impl<F: Scalar> OperatorMatrix<F> {
    pub fn from_matrix(n: usize, d: usize, matrix: ExactMatrix<F>) -> Result<Self> {
        let dim = config_count(n, d);
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::shape(format!(
                "operator on B({n},{d}) must be {dim}x{dim}"
            )));
        }
        Ok(OperatorMatrix { n, d, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &ExactMatrix<F> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ExactMatrix<F> {
        self.matrix
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if (self.n, self.d) != (other.n, other.d) {
            return Err(Error::shape("operators on different spaces"));
        }
        Ok(OperatorMatrix {
            n: self.n,
            d: self.d,
            matrix: self.matrix.checked_mul(&other.matrix)?,
        })
    }

    /// Entries as comma-separated rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.matrix.rows() {
            let row: Vec<String> = self.matrix.row(i).iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Middle configurations `T` with `Γ_{S,T} = g`: ball `k` in box `j` of `S`
/// goes to a box `i` of `T` with an unused edge `(i', j)`.
fn configs_with_graph(s: &BallsConfig, g: &Multigraph) -> Vec<BallsConfig> {
    fn rec(k: usize, s: &[usize], g: &Multigraph, quota: &mut [u32], t: &mut Vec<usize>, out: &mut Vec<BallsConfig>) {
        if k == s.len() {
            out.push(BallsConfig::new(g.n_up(), t.clone()).expect("boxes in range"));
            return;
        }
        for i in 0..g.n_up() {
            let q = i * g.n_down() + s[k];
            if quota[q] > 0 {
                quota[q] -= 1;
                t.push(i);
                rec(k + 1, s, g, quota, t, out);
                t.pop();
                quota[q] += 1;
            }
        }
    }
    let mut out = Vec::new();
    if s.n() != g.n_down() || s.d() != g.degree() {
        return out;
    }
    let mut quota = g.flat().to_vec();
    rec(0, s.as_slice(), g, &mut quota, &mut Vec::new(), &mut out);
    out
}

/// Sparse rows of the kernel of `b` with integer entries.
pub fn operator_rows(b: &BasisSymbol) -> Vec<Vec<(usize, i64)>> {
    let (n, d) = (b.n(), b.d());
    let g = b.graph();
    (0..config_count(n, d))
        .map(|si| {
            let s = BallsConfig::from_index(n, d, si);
            let mut row: Vec<(usize, i64)> = configs_with_graph(&s, g)
                .into_iter()
                .map(|t| {
                    let w = match b {
                        BasisSymbol::Even(_) => 1,
                        BasisSymbol::Odd(_) => pair_sign(&s, &t).expect("simple graph is transverse"),
                    };
                    (t.index(), w)
                })
                .collect();
            row.sort_unstable();
            row
        })
        .collect()
}

/// The matrix of `ξ_Γ` or `ζ_Γ` on `F[B(n,d)]`.
pub fn operator_matrix<F: Scalar>(b: &BasisSymbol, budget: &Budget) -> Result<OperatorMatrix<F>> {
    let (n, d) = (b.n(), b.d());
    b.check_shape(n, d)?;
    budget.check_configs(n, d)?;
    let dim = config_count(n, d);
    let mut m = ExactMatrix::zeros(dim, dim);
    for (i, row) in operator_rows(b).into_iter().enumerate() {
        for (j, w) in row {
            m.set(i, j, F::from_i64(w));
        }
    }
    Ok(OperatorMatrix { n, d, matrix: m })
}

/// Matrix of an arbitrary element.
pub fn element_matrix<F: Scalar>(x: &GradedElement<F>, budget: &Budget) -> Result<OperatorMatrix<F>> {
    let (n, d) = (x.n(), x.d());
    budget.check_configs(n, d)?;
    let dim = config_count(n, d);
    let mut m = ExactMatrix::zeros(dim, dim);
    for (b, c) in x.terms() {
        for (i, row) in operator_rows(b).into_iter().enumerate() {
            for (j, w) in row {
                m.add_at(i, j, c.clone() * F::from_i64(w));
            }
        }
    }
    Ok(OperatorMatrix { n, d, matrix: m })
}

fn random_permutation(rng: &mut ChaCha8Rng, d: usize) -> Vec<usize> {
    let mut w: Vec<usize> = (0..d).collect();
    w.shuffle(rng);
    w
}

/// Reads coefficients at representative pairs after spot checks.
fn decompose_with<F: Scalar>(
    n: usize,
    d: usize,
    parity: Parity,
    entry: &dyn Fn(usize, usize) -> F,
    seed: u64,
) -> Result<GradedElement<F>> {
    let dim = config_count(n, d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = 20;
    for _ in 0..samples {
        let w = random_permutation(&mut rng, d);
        let chi = match parity {
            Parity::Even => F::one(),
            Parity::Odd => F::from_i64(permutation_sign(&w)),
        };
        for _ in 0..samples {
            let s = BallsConfig::from_index(n, d, rng.gen_range(0..dim));
            let t = BallsConfig::from_index(n, d, rng.gen_range(0..dim));
            let (sw, tw) = (s.act(&w), t.act(&w));
            if entry(sw.index(), tw.index()) != chi.clone() * entry(s.index(), t.index()) {
                return Err(Error::NonEquivariant(format!(
                    "w = {w:?} at ({:?}, {:?})",
                    s.as_slice(),
                    t.as_slice()
                )));
            }
        }
    }
    if parity == Parity::Odd && d >= 2 && n >= 1 {
        for _ in 0..samples {
            // balls 0 and 1 share a box in both configurations
            let mut s = BallsConfig::from_index(n, d, rng.gen_range(0..dim)).as_slice().to_vec();
            let mut t = BallsConfig::from_index(n, d, rng.gen_range(0..dim)).as_slice().to_vec();
            s[1] = s[0];
            t[1] = t[0];
            let s = BallsConfig::new(n, s)?;
            let t = BallsConfig::new(n, t)?;
            let v = entry(s.index(), t.index());
            if !v.is_zero() {
                return Err(Error::NonZeroAtNonTransverse(format!(
                    "({:?}, {:?}) carries {}",
                    s.as_slice(),
                    t.as_slice(),
                    v.to_canonical()
                )));
            }
        }
    }
    let graphs: Vec<Multigraph> = match parity {
        Parity::Even => enum_m(n, d),
        Parity::Odd => enum_n(n, d).into_iter().map(|g| g.into_multigraph()).collect(),
    };
    let mut out = GradedElement::zero(n, d);
    let mut terms = Vec::new();
    for g in graphs {
        let (s, u) = representative_pair(&g);
        let c = entry(s.index(), u.index());
        if !c.is_zero() {
            terms.push((BasisSymbol::new(parity, g)?, c));
        }
    }
    if !terms.is_empty() {
        out = GradedElement::from_terms(n, d, terms)?;
    }
    Ok(out)
}

/// Expresses an equivariant (or sign-equivariant for `Odd`) operator in the
/// graph basis. Equivariance is spot-checked with seeded random permutations.
pub fn decompose<F: Scalar>(m: &OperatorMatrix<F>, parity: Parity) -> Result<GradedElement<F>> {
    let entry = |i: usize, j: usize| m.matrix.get(i, j).clone();
    decompose_with(m.n, m.d, parity, &entry, 0x5eed ^ (m.n as u64) << 8 ^ m.d as u64)
}

/// Rank of the span of all basis operators, flattened to vectors.
pub fn operator_span_rank<F: Scalar>(n: usize, d: usize, budget: &Budget) -> Result<usize> {
    budget.check_configs(n, d)?;
    let dim = config_count(n, d);
    let mut ech: SparseEchelon<F> = SparseEchelon::new(dim * dim);
    let syms = enum_m(n, d)
        .into_iter()
        .map(BasisSymbol::Even)
        .chain(enum_n(n, d).into_iter().map(BasisSymbol::Odd));
    for b in syms {
        let flat = operator_rows(&b)
            .into_iter()
            .enumerate()
            .flat_map(|(i, row)| row.into_iter().map(move |(j, w)| (i * dim + j, F::from_i64(w))))
            .collect::<Vec<_>>();
        ech.insert(flat);
    }
    Ok(ech.rank())
}

/// Outcome of comparing every basis product with the operator product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub d: usize,
    pub field: FieldSpec,
    pub pairs: usize,
    pub passed: bool,
    pub first_mismatch: Option<String>,
}

type SparseRow<F> = BTreeMap<usize, F>;

/// For every pair of basis symbols, multiplies the operator matrices, reads
/// the product back in the graph basis and compares with the structure
/// constants. The full product is also compared entrywise with the operator
/// of the predicted element, so components outside the basis cannot hide.
pub fn verify_table<F: Scalar>(n: usize, d: usize, budget: &Budget) -> Result<VerifyReport> {
    budget.check_configs(n, d)?;
    budget.check_basis(n, d)?;
    let table = StructureTable::get(n, d)?;
    let syms = table.symbols();
    let rows: Vec<Vec<Vec<(usize, F)>>> = syms
        .par_iter()
        .map(|b| {
            operator_rows(b)
                .into_iter()
                .map(|row| row.into_iter().map(|(j, w)| (j, F::from_i64(w))).collect())
                .collect()
        })
        .collect();
    let dim = config_count(n, d);
    let m_dim = table.even_dim();
    let check_pair = |a: usize, b: usize| -> Option<String> {
        let (sa, sb) = (&syms[a], &syms[b]);
        let product: Vec<SparseRow<F>> = (0..dim)
            .map(|i| {
                let mut acc = SparseRow::new();
                for (t, x) in &rows[a][i] {
                    for (j, y) in &rows[b][*t] {
                        let e = acc.entry(*j).or_insert_with(F::zero);
                        *e = e.clone() + x.clone() * y.clone();
                    }
                }
                acc.retain(|_, v| !v.is_zero());
                acc
            })
            .collect();
        let entry = |i: usize, j: usize| product[i].get(&j).cloned().unwrap_or_else(F::zero);
        let parity = sa.parity().combine(sb.parity());
        let seed = (a * syms.len() + b) as u64;
        let decomposed = match decompose_with(n, d, parity, &entry, seed) {
            Ok(x) => x,
            Err(e) => return Some(format!("{sa:?} * {sb:?}: {e}")),
        };
        let case = ParityCase::of(sa.parity(), sb.parity());
        let (ia, ib) = (block(a, m_dim), block(b, m_dim));
        let target_offset = if case.target() == Parity::Even { 0 } else { m_dim };
        let predicted_terms: Vec<(usize, i64)> = table
            .product(case, ia, ib)
            .iter()
            .map(|&(t, c)| (t as usize + target_offset, c))
            .collect();
        let predicted = GradedElement::from_terms(
            n,
            d,
            predicted_terms
                .iter()
                .map(|&(t, c)| (syms[t].clone(), F::from_i64(c))),
        )
        .expect("table symbols have the right shape");
        if decomposed != predicted {
            return Some(format!(
                "{sa:?} * {sb:?}: operator gives {decomposed:?}, table gives {predicted:?}"
            ));
        }
        let mut expected: Vec<SparseRow<F>> = vec![SparseRow::new(); dim];
        for &(t, c) in &predicted_terms {
            let c = F::from_i64(c);
            for (i, row) in rows[t].iter().enumerate() {
                for (j, w) in row {
                    let e = expected[i].entry(*j).or_insert_with(F::zero);
                    *e = e.clone() + c.clone() * w.clone();
                }
            }
        }
        for row in &mut expected {
            row.retain(|_, v| !v.is_zero());
        }
        if expected != product {
            return Some(format!(
                "{sa:?} * {sb:?}: operator product differs from the predicted element off the representatives"
            ));
        }
        None
    };
    let count = syms.len();
    let first_mismatch = (0..count * count)
        .into_par_iter()
        .filter_map(|k| check_pair(k / count, k % count).map(|msg| (k, msg)))
        .min_by_key(|(k, _)| *k)
        .map(|(_, msg)| msg);
    Ok(VerifyReport {
        n,
        d,
        field: F::field(),
        pairs: count * count,
        passed: first_mismatch.is_none(),
        first_mismatch,
    })
}

fn block(idx: usize, m_dim: usize) -> usize {
    if idx < m_dim {
        idx
    } else {
        idx - m_dim
    }
}
