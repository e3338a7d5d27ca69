use std::fmt;

use super::dual::{koszul_dual, KoszulDual};
use super::module::{sparse_combination, sparse_product, SModule, Validation};
use super::coeff;
use crate::algebra::{ParityCase, StructureTable};
use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, SparseRows};
use crate::scalar::Scalar;

/// A module over the whole of `AS(n,d)`: the `S`-module `even` together with
/// the action of each `ζ_Γ`, `Γ` in canonical `N(n,d)` order.
#[derive(Clone, PartialEq, Eq)]
pub struct ASModule<F> {
    even: SModule<F>,
    odd_action: Vec<ExactMatrix<F>>,
}

impl<F: Scalar> fmt::Debug for ASModule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ASModule(n={}, d={}, dim={})",
            self.even.n(),
            self.even.d(),
            self.even.dim()
        )
    }
}

impl<F: Scalar> ASModule<F> {
    pub fn new(even: SModule<F>, odd_action: Vec<ExactMatrix<F>>, validation: Validation) -> Result<Self> {
        let table = StructureTable::get(even.n(), even.d())?;
        if odd_action.len() != table.odd_dim() {
            return Err(Error::LengthMismatch {
                expected: table.odd_dim(),
                found: odd_action.len(),
            });
        }
        let dim = even.dim();
        if odd_action.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::InvalidModule(format!("odd action matrices must be {dim}x{dim}")));
        }
        let module = ASModule { even, odd_action };
        module.validate(validation)?;
        Ok(module)
    }

    pub fn even(&self) -> &SModule<F> {
        &self.even
    }

    pub fn odd_action(&self) -> &[ExactMatrix<F>] {
        &self.odd_action
    }

    pub fn dim(&self) -> usize {
        self.even.dim()
    }

    /// Even action matrices followed by odd ones, in basis-symbol order.
    pub fn all_actions(&self) -> Vec<ExactMatrix<F>> {
        self.even
            .action()
            .iter()
            .chain(&self.odd_action)
            .cloned()
            .collect()
    }

    /// Multiplicativity in all four parity cases.
    pub fn validate(&self, validation: Validation) -> Result<()> {
        self.even.validate(validation)?;
        if validation == Validation::Skip {
            return Ok(());
        }
        let table = StructureTable::get(self.even.n(), self.even.d())?;
        let dim = self.dim();
        let even: Vec<SparseRows<F>> = self.even.action().iter().map(ExactMatrix::sparse_rows).collect();
        let odd: Vec<SparseRows<F>> = self.odd_action.iter().map(ExactMatrix::sparse_rows).collect();
        for case in [ParityCase::EvenOdd, ParityCase::OddEven, ParityCase::OddOdd] {
            let (left, right, target) = match case {
                ParityCase::EvenOdd => (&even, &odd, &odd),
                ParityCase::OddEven => (&odd, &even, &odd),
                _ => (&odd, &odd, &even),
            };
            for (a, b) in validation.pairs(left.len(), right.len(), 0x0dd + case as u64) {
                let lhs = sparse_product(&left[a], &right[b]);
                let rhs = sparse_combination(
                    dim,
                    table
                        .product(case, a, b)
                        .iter()
                        .map(|&(t, c)| (coeff::<F>(c), &target[t as usize])),
                );
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!(
                        "odd action is not multiplicative in case {} at ({a}, {b})",
                        case.key()
                    )));
                }
            }
        }
        Ok(())
    }

    /// `AS` acting on itself by left multiplication, basis `M(n,d)` then `N(n,d)`.
    pub fn regular(n: usize, d: usize) -> Result<Self> {
        let table = StructureTable::get(n, d)?;
        let (m, nn) = (table.even_dim(), table.odd_dim());
        let dim = m + nn;
        let fill = |x: &mut ExactMatrix<F>, col: usize, offset: usize, terms: &[(u32, i64)]| {
            for &(t, c) in terms {
                x.set(offset + t as usize, col, coeff(c));
            }
        };
        let even_action = (0..m)
            .map(|g| {
                let mut x = ExactMatrix::zeros(dim, dim);
                for b in 0..m {
                    fill(&mut x, b, 0, table.product(ParityCase::EvenEven, g, b));
                }
                for b in 0..nn {
                    fill(&mut x, m + b, m, table.product(ParityCase::EvenOdd, g, b));
                }
                x
            })
            .collect();
        let odd_action = (0..nn)
            .map(|a| {
                let mut x = ExactMatrix::zeros(dim, dim);
                for b in 0..m {
                    fill(&mut x, b, m, table.product(ParityCase::OddEven, a, b));
                }
                for b in 0..nn {
                    fill(&mut x, m + b, 0, table.product(ParityCase::OddOdd, a, b));
                }
                x
            })
            .collect();
        let validation = Validation::auto(m);
        let even = SModule::new(n, d, dim, even_action, validation)?;
        ASModule::new(even, odd_action, validation)
    }

    pub fn zero(n: usize, d: usize) -> Result<Self> {
        let table = StructureTable::get(n, d)?;
        let even = SModule::zero(n, d)?;
        ASModule::new(even, vec![ExactMatrix::zeros(0, 0); table.odd_dim()], Validation::Skip)
    }
}

/// An `S`-module `M` with a module map `θ: D(M) → M` compatible with `φ`.
#[derive(Clone, Debug)]
pub struct ThetaPair<F: Scalar> {
    base: SModule<F>,
    dual: KoszulDual<F>,
    theta: ExactMatrix<F>,
}

impl<F: Scalar> ThetaPair<F> {
    /// Pairs `base` with `θ`, given as a `dim M × dim D(M)` matrix in the
    /// quotient basis of [`koszul_dual`]. Compatibility is checked by
    /// [`pair_to_as_module`], not here.
    pub fn new(base: SModule<F>, theta: ExactMatrix<F>) -> Result<Self> {
        let dual = koszul_dual(&base)?;
        if theta.rows() != base.dim() || theta.cols() != dual.dim() {
            return Err(Error::shape(format!(
                "θ must be {}x{}, got {}x{}",
                base.dim(),
                dual.dim(),
                theta.rows(),
                theta.cols()
            )));
        }
        Ok(ThetaPair { base, dual, theta })
    }

    pub fn base(&self) -> &SModule<F> {
        &self.base
    }

    pub fn dual(&self) -> &KoszulDual<F> {
        &self.dual
    }

    pub fn theta(&self) -> &ExactMatrix<F> {
        &self.theta
    }
}

/// `M ↦ (M, θ_M)` with `θ_M(ζ ⊗ v) = ζ · v`.
pub fn as_module_to_pair<F: Scalar>(module: &ASModule<F>) -> Result<ThetaPair<F>> {
    let base = module.even().clone();
    let dual = koszul_dual(&base)?;
    let dim = base.dim();
    let mut theta = ExactMatrix::zeros(dim, dual.dim());
    for (q, &(b, k)) in dual.basis().iter().enumerate() {
        for r in 0..dim {
            theta.set(r, q, module.odd_action()[b].get(r, k).clone());
        }
    }
    Ok(ThetaPair { base, dual, theta })
}

/// Inverse of [`as_module_to_pair`]: `ζ_a` acts by `v ↦ θ(ζ_a ⊗ v)`.
/// Fails with [`Error::IncompatibleTheta`] unless `θ` is `S`-linear and
/// `θ ∘ (1 ⊗ θ) = φ ⊗ 1`.
pub fn pair_to_as_module<F: Scalar>(pair: &ThetaPair<F>) -> Result<ASModule<F>> {
    let base = pair.base();
    let table = StructureTable::get(base.n(), base.d())?;
    let dim = base.dim();
    let dual = pair.dual();
    for (g, a) in base.action().iter().enumerate() {
        if a * &pair.theta != &pair.theta * &dual.module().action()[g] {
            return Err(Error::IncompatibleTheta(format!(
                "θ does not commute with the action of {:?}",
                table.even_basis()[g]
            )));
        }
    }
    let odd_action: Vec<ExactMatrix<F>> = (0..table.odd_dim())
        .map(|a| {
            let mut x = ExactMatrix::zeros(dim, dim);
            for k in 0..dim {
                let coords = dual.project([((a, k), F::one())]);
                let image = pair.theta.mul_vec(&coords);
                for (r, y) in image.into_iter().enumerate() {
                    x.set(r, k, y);
                }
            }
            x
        })
        .collect();
    for a in 0..table.odd_dim() {
        for b in 0..table.odd_dim() {
            let mut rhs = ExactMatrix::zeros(dim, dim);
            for &(t, c) in table.product(ParityCase::OddOdd, a, b) {
                rhs = rhs.checked_add(&base.action()[t as usize].scale(&coeff(c)))?;
            }
            if &odd_action[a] * &odd_action[b] != rhs {
                return Err(Error::IncompatibleTheta(format!(
                    "θ(1 ⊗ θ) differs from φ ⊗ 1 on ζ{} ⊗ ζ{}",
                    table.odd_basis()[a].as_multigraph(),
                    table.odd_basis()[b].as_multigraph()
                )));
            }
        }
    }
    ASModule::new(base.clone(), odd_action, Validation::auto(table.even_dim()))
}
