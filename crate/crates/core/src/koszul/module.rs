use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{dense, left_sparse};
use crate::algebra::{ParityCase, StructureTable};
use crate::enumerate::enum_lambda;
use crate::error::{Error, Result};
use crate::graph::gamma0_lambda;
use crate::linalg::{intertwiners, ExactMatrix, SparseRows};
use crate::scalar::Scalar;

/// How much of the module axioms a constructor checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validation {
    /// Every pair of basis elements.
    Full,
    /// The given number of seeded random pairs.
    Sampled(usize),
    Skip,
}

impl Validation {
    /// Full checks for small algebras, 64 sampled pairs otherwise.
    pub fn auto(even_dim: usize) -> Self {
        if even_dim <= 40 {
            Validation::Full
        } else {
            Validation::Sampled(64)
        }
    }

    pub(crate) fn pairs(self, left: usize, right: usize, seed: u64) -> Vec<(usize, usize)> {
        match self {
            Validation::Full => (0..left)
                .flat_map(|a| (0..right).map(move |b| (a, b)))
                .collect(),
            Validation::Sampled(k) if left > 0 && right > 0 => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..k)
                    .map(|_| (rng.gen_range(0..left), rng.gen_range(0..right)))
                    .collect()
            }
            _ => Vec::new(),
        }
    }
}

type RowMaps<F> = Vec<BTreeMap<usize, F>>;

pub(crate) fn sparse_product<F: Scalar>(a: &SparseRows<F>, b: &SparseRows<F>) -> RowMaps<F> {
    a.iter()
        .map(|row| {
            let mut acc = BTreeMap::new();
            for (k, x) in row {
                for (j, y) in &b[*k] {
                    let e = acc.entry(*j).or_insert_with(F::zero);
                    *e = e.clone() + x.clone() * y.clone();
                }
            }
            acc.retain(|_, v: &mut F| !v.is_zero());
            acc
        })
        .collect()
}

pub(crate) fn sparse_combination<'a, F: Scalar + 'a>(
    dim: usize,
    terms: impl IntoIterator<Item = (F, &'a SparseRows<F>)>,
) -> RowMaps<F> {
    let mut out: RowMaps<F> = vec![BTreeMap::new(); dim];
    for (c, m) in terms {
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row {
                let e = out[i].entry(*j).or_insert_with(F::zero);
                *e = e.clone() + c.clone() * x.clone();
            }
        }
    }
    for row in &mut out {
        row.retain(|_, v| !v.is_zero());
    }
    out
}

/// A finite-dimensional left `S(n,d)`-module: `action[g]` is the matrix of
/// `ξ_g` for `g` in canonical `M(n,d)` order.
#[derive(Clone, PartialEq, Eq)]
pub struct SModule<F> {
    n: usize,
    d: usize,
    dim: usize,
    action: Vec<ExactMatrix<F>>,
}

impl<F: Scalar> fmt::Debug for SModule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SModule(n={}, d={}, dim={})", self.n, self.d, self.dim)
    }
}

impl<F: Scalar> SModule<F> {
    pub fn new(
        n: usize,
        d: usize,
        dim: usize,
        action: Vec<ExactMatrix<F>>,
        validation: Validation,
    ) -> Result<Self> {
        let table = StructureTable::get(n, d)?;
        if action.len() != table.even_dim() {
            return Err(Error::LengthMismatch {
                expected: table.even_dim(),
                found: action.len(),
            });
        }
        if action.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::InvalidModule(format!("action matrices must be {dim}x{dim}")));
        }
        let module = SModule { n, d, dim, action };
        module.validate(validation)?;
        Ok(module)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[ExactMatrix<F>] {
        &self.action
    }

    pub(crate) fn sparse_action(&self) -> Vec<SparseRows<F>> {
        self.action.iter().map(ExactMatrix::sparse_rows).collect()
    }

    /// Checks that `1` acts as the identity and that the action is multiplicative.
    pub fn validate(&self, validation: Validation) -> Result<()> {
        if validation == Validation::Skip {
            return Ok(());
        }
        let table = StructureTable::get(self.n, self.d)?;
        let mut one = ExactMatrix::zeros(self.dim, self.dim);
        for lambda in enum_lambda(self.n, self.d) {
            let g = gamma0_lambda(&lambda, self.n)?;
            let idx = table.even_index(&g).expect("diagonal graph is a basis graph");
            one = one.checked_add(&self.action[idx])?;
        }
        if one != ExactMatrix::identity(self.dim) {
            return Err(Error::InvalidModule("the identity does not act as 1".into()));
        }
        let sparse = self.sparse_action();
        let m = table.even_dim();
        for (a, b) in validation.pairs(m, m, 0xacc7 + self.dim as u64) {
            let lhs = sparse_product(&sparse[a], &sparse[b]);
            let rhs = sparse_combination(
                self.dim,
                table
                    .product(ParityCase::EvenEven, a, b)
                    .iter()
                    .map(|&(t, c)| (F::from_i64(c), &sparse[t as usize])),
            );
            if lhs != rhs {
                return Err(Error::InvalidModule(format!(
                    "action is not multiplicative on {:?} * {:?}",
                    table.even_basis()[a],
                    table.even_basis()[b]
                )));
            }
        }
        Ok(())
    }

    /// `S` acting on itself by left multiplication, basis `M(n,d)`.
    pub fn regular(n: usize, d: usize) -> Result<Self> {
        let table = StructureTable::get(n, d)?;
        let m = table.even_dim();
        let action = (0..m)
            .map(|g| {
                let mut x = ExactMatrix::zeros(m, m);
                for b in 0..m {
                    for &(t, c) in table.product(ParityCase::EvenEven, g, b) {
                        x.set(t as usize, b, F::from_i64(c));
                    }
                }
                x
            })
            .collect();
        SModule::new(n, d, m, action, Validation::auto(m))
    }

    /// The left ideal `S ξ_{Γ⁰_λ}`, spanned by the `ξ_b` whose upper degrees are `λ`.
    pub fn column(n: usize, d: usize, lambda: &[usize]) -> Result<Self> {
        let table = StructureTable::get(n, d)?;
        let mut lam = lambda.to_vec();
        if lam.len() > n || lam.iter().sum::<usize>() != d {
            return Err(Error::InvalidComposition(format!("{lambda:?} is not in Λ({n},{d})")));
        }
        lam.resize(n, 0);
        let members: Vec<usize> = (0..table.even_dim())
            .filter(|&b| table.even_basis()[b].upper_degrees() == lam)
            .collect();
        let pos: BTreeMap<usize, usize> = members.iter().enumerate().map(|(k, &b)| (b, k)).collect();
        let dim = members.len();
        let action = (0..table.even_dim())
            .map(|g| {
                let mut x = ExactMatrix::zeros(dim, dim);
                for (k, &b) in members.iter().enumerate() {
                    for &(t, c) in table.product(ParityCase::EvenEven, g, b) {
                        let row = pos[&(t as usize)];
                        x.set(row, k, F::from_i64(c));
                    }
                }
                x
            })
            .collect();
        SModule::new(n, d, dim, action, Validation::auto(table.even_dim()))
    }

    pub fn zero(n: usize, d: usize) -> Result<Self> {
        let table = StructureTable::get(n, d)?;
        let action = vec![ExactMatrix::zeros(0, 0); table.even_dim()];
        SModule::new(n, d, 0, action, Validation::Skip)
    }

    /// `S⁻` with `S` acting by left multiplication, basis `N(n,d)`.
    pub fn odd_left(n: usize, d: usize) -> Result<Self> {
        let table = StructureTable::get(n, d)?;
        let nn = table.odd_dim();
        let action = (0..table.even_dim())
            .map(|g| dense(&left_sparse::<F>(&table, g), nn))
            .collect();
        SModule::new(n, d, nn, action, Validation::auto(table.even_dim()))
    }
}

/// Basis of `Hom_S(A, B)` as `dim B × dim A` matrices.
pub fn hom_space<F: Scalar>(a: &SModule<F>, b: &SModule<F>) -> Result<Vec<ExactMatrix<F>>> {
    if (a.n, a.d) != (b.n, b.d) {
        return Err(Error::shape("modules over different algebras"));
    }
    intertwiners(&a.action, &b.action, a.dim, b.dim)
}

/// An invertible module map `A → B` if one is found among seeded random
/// combinations of a `Hom` basis (`None` when dimensions differ or none is found).
pub fn find_isomorphism<F: Scalar>(a: &SModule<F>, b: &SModule<F>, seed: u64) -> Result<Option<ExactMatrix<F>>> {
    if a.dim != b.dim {
        return Ok(None);
    }
    if a.dim == 0 {
        return Ok(Some(ExactMatrix::zeros(0, 0)));
    }
    let basis = hom_space(a, b)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let mut x = ExactMatrix::zeros(b.dim, a.dim);
        for h in &basis {
            let c = F::from_i64(rng.gen_range(-50..=50));
            x = x.checked_add(&h.scale(&c))?;
        }
        if x.rank() == a.dim {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn regular_and_columns_validate() {
        let r = SModule::<Rational>::regular(2, 2).unwrap();
        assert_eq!(r.dim(), 10);
        let total: usize = enum_lambda(2, 2)
            .iter()
            .map(|l| SModule::<Rational>::column(2, 2, l).unwrap().dim())
            .sum();
        assert_eq!(total, 10);
        assert_eq!(SModule::<Rational>::zero(2, 2).unwrap().dim(), 0);
        assert_eq!(SModule::<Rational>::odd_left(2, 2).unwrap().dim(), 6);
    }

    #[test]
    fn broken_action_is_rejected() {
        let r = SModule::<Rational>::regular(2, 2).unwrap();
        let mut action = r.action().to_vec();
        action[3] = ExactMatrix::zeros(10, 10);
        let res = SModule::new(2, 2, 10, action, Validation::Full);
        assert!(matches!(res, Err(Error::InvalidModule(_))));
    }

    #[test]
    fn endomorphisms_of_regular_module() {
        // End_S(S) ≅ S^op has dimension |M|
        let r = SModule::<Rational>::regular(2, 2).unwrap();
        assert_eq!(hom_space(&r, &r).unwrap().len(), 10);
        assert!(find_isomorphism(&r, &r, 1).unwrap().is_some());
    }
}
