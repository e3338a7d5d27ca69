//! Koszul-duality diagnostics for `S = S(n,d)` and the bimodule `S⁻ = S⁻(n,d)`.
//!
//! Every tensor product over `S` is realised as the quotient of the free
//! tensor space on basis symbols by the relations coming from basis triples.
//! Idempotent relations (`ξ_{Γ⁰_λ}`) are fed to the echelon form first: they
//! are mostly single coordinates and prune the remaining reductions.

mod correspondence;
mod dual;
mod module;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

pub use correspondence::{as_module_to_pair, pair_to_as_module, ASModule, ThetaPair};
pub use dual::{eta_map, koszul_dual, ringel_dual, EtaMap, KoszulDual, RingelDual};
pub use module::{find_isomorphism, hom_space, SModule, Validation};

use crate::algebra::{GradedElement, ParityCase, StructureTable};
use crate::error::Result;
use crate::graph::Multigraph;
use crate::linalg::{sparse_intertwiner_dim, ExactMatrix, SparseEchelon, SparseRows};
use crate::scalar::{FieldSpec, Scalar};

/// Even basis indices with the diagonal graphs `Γ⁰_λ` first.
pub(crate) fn idempotents_first(table: &StructureTable) -> Vec<usize> {
    let is_diag = |g: &Multigraph| {
        (0..g.n_up()).all(|i| (0..g.n_down()).all(|j| i == j || g.mult(i, j) == 0))
    };
    let (mut diag, rest): (Vec<usize>, Vec<usize>) =
        (0..table.even_dim()).partition(|&i| is_diag(&table.even_basis()[i]));
    diag.extend(rest);
    diag
}

fn coeff<F: Scalar>(c: i64) -> F {
    F::from_i64(c)
}

/// `ξ_g` acting on `span{ζ}` from the left: column `b` holds `ξ_g ζ_b`.
pub(crate) fn left_sparse<F: Scalar>(table: &StructureTable, g: usize) -> SparseRows<F> {
    let mut rows = vec![Vec::new(); table.odd_dim()];
    for b in 0..table.odd_dim() {
        for &(t, c) in table.product(ParityCase::EvenOdd, g, b) {
            rows[t as usize].push((b, coeff(c)));
        }
    }
    rows
}

/// `ξ_g` acting on `span{ζ}` from the right: column `b` holds `ζ_b ξ_g`.
pub(crate) fn right_sparse<F: Scalar>(table: &StructureTable, g: usize) -> SparseRows<F> {
    let mut rows = vec![Vec::new(); table.odd_dim()];
    for b in 0..table.odd_dim() {
        for &(t, c) in table.product(ParityCase::OddEven, b, g) {
            rows[t as usize].push((b, coeff(c)));
        }
    }
    rows
}

pub(crate) fn dense<F: Scalar>(rows: &SparseRows<F>, cols: usize) -> ExactMatrix<F> {
    let mut m = ExactMatrix::zeros(rows.len(), cols);
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row {
            m.set(i, *j, x.clone());
        }
    }
    m
}

/// `S⁻` as an `(S,S)`-bimodule in the basis `enum_n(n,d)`.
#[derive(Clone, Debug)]
pub struct BimoduleData<F: Scalar> {
    pub n: usize,
    pub d: usize,
    /// `left_mult[g]` is the matrix of `ζ ↦ ξ_g ζ`.
    pub left_mult: Vec<ExactMatrix<F>>,
    /// `right_mult[g]` is the matrix of `ζ ↦ ζ ξ_g`.
    pub right_mult: Vec<ExactMatrix<F>>,
}

pub fn bimodule_data<F: Scalar>(n: usize, d: usize) -> Result<BimoduleData<F>> {
    let table = StructureTable::get(n, d)?;
    let nn = table.odd_dim();
    Ok(BimoduleData {
        n,
        d,
        left_mult: (0..table.even_dim())
            .map(|g| dense(&left_sparse::<F>(&table, g), nn))
            .collect(),
        right_mult: (0..table.even_dim())
            .map(|g| dense(&right_sparse::<F>(&table, g), nn))
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiReport {
    pub even_dim: usize,
    pub odd_dim: usize,
    /// `dim S⁻ ⊗_S S⁻`.
    pub tensor_dim: usize,
    /// Rank of `φ: S⁻ ⊗_S S⁻ → S`.
    pub phi_rank: usize,
    pub surjective: bool,
    pub injective: bool,
    pub iso: bool,
}

/// Dimension of `S⁻ ⊗_S S⁻` and rank of the multiplication map into `S`.
pub fn phi_analysis<F: Scalar>(n: usize, d: usize) -> Result<PhiReport> {
    let table = StructureTable::get(n, d)?;
    Ok(phi_from_table::<F>(&table))
}

fn phi_from_table<F: Scalar>(table: &StructureTable) -> PhiReport {
    let (m, nn) = (table.even_dim(), table.odd_dim());
    let mut ech: SparseEchelon<F> = SparseEchelon::new(nn * nn);
    for g in idempotents_first(table) {
        let lefts: Vec<usize> = (0..nn)
            .filter(|&a| !table.product(ParityCase::OddEven, a, g).is_empty())
            .collect();
        let rights: Vec<usize> = (0..nn)
            .filter(|&b| !table.product(ParityCase::EvenOdd, g, b).is_empty())
            .collect();
        let mut pairs: Vec<(usize, usize)> = lefts
            .iter()
            .flat_map(|&a| (0..nn).map(move |b| (a, b)))
            .chain(rights.iter().flat_map(|&b| (0..nn).map(move |a| (a, b))))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        for (a, b) in pairs {
            // (ζ_a ξ_g) ⊗ ζ_b − ζ_a ⊗ (ξ_g ζ_b)
            let rel = table
                .product(ParityCase::OddEven, a, g)
                .iter()
                .map(|&(t, c)| (t as usize * nn + b, coeff::<F>(c)))
                .chain(
                    table
                        .product(ParityCase::EvenOdd, g, b)
                        .iter()
                        .map(|&(t, c)| (a * nn + t as usize, -coeff::<F>(c))),
                );
            ech.insert(rel);
        }
    }
    let tensor_dim = nn * nn - ech.rank();
    let mut image: SparseEchelon<F> = SparseEchelon::new(m);
    for a in 0..nn {
        for b in 0..nn {
            let v = table.product(ParityCase::OddOdd, a, b);
            if !v.is_empty() {
                image.insert(v.iter().map(|&(t, c)| (t as usize, coeff::<F>(c))));
            }
        }
    }
    let phi_rank = image.rank();
    let surjective = phi_rank == m;
    let injective = tensor_dim == phi_rank;
    PhiReport {
        even_dim: m,
        odd_dim: nn,
        tensor_dim,
        phi_rank,
        surjective,
        injective,
        iso: surjective && injective,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiReport {
    /// Dimension of the kernel of `ψ: S → End_S(S⁻_S)`.
    pub kernel_dim: usize,
    /// Basis graphs whose `ξ` annihilates `S⁻` from the left.
    pub kernel_witnesses: Vec<Multigraph>,
    pub image_dim: usize,
    /// `dim End_S(S⁻_S)`.
    pub commutant_dim: usize,
    pub iso: bool,
}

/// Kernel of `ψ` as elements of `S`.
pub fn psi_kernel<F: Scalar>(n: usize, d: usize) -> Result<Vec<GradedElement<F>>> {
    let table = StructureTable::get(n, d)?;
    let ech = psi_kernel_system::<F>(&table);
    ech.nullspace_basis()
        .into_iter()
        .map(|v| {
            GradedElement::from_terms(
                n,
                d,
                v.into_iter()
                    .enumerate()
                    .map(|(g, c)| (table.symbol(crate::algebra::Parity::Even, g), c)),
            )
        })
        .collect()
}

fn psi_kernel_system<F: Scalar>(table: &StructureTable) -> SparseEchelon<F> {
    // one equation per matrix entry (t, b): Σ_g α_g L_g[t][b] = 0
    let mut eqs: BTreeMap<(usize, usize), Vec<(usize, F)>> = BTreeMap::new();
    for g in 0..table.even_dim() {
        for b in 0..table.odd_dim() {
            for &(t, c) in table.product(ParityCase::EvenOdd, g, b) {
                eqs.entry((t as usize, b)).or_default().push((g, coeff(c)));
            }
        }
    }
    let mut ech = SparseEchelon::new(table.even_dim());
    for (_, eq) in eqs {
        ech.insert(eq);
    }
    ech
}

/// Kernel and image of `ψ` against the commutant of the right `S`-action on `S⁻`.
pub fn psi_analysis<F: Scalar>(n: usize, d: usize) -> Result<PsiReport> {
    let table = StructureTable::get(n, d)?;
    psi_from_table::<F>(&table)
}

fn psi_from_table<F: Scalar>(table: &StructureTable) -> Result<PsiReport> {
    let (m, nn) = (table.even_dim(), table.odd_dim());
    let ech = psi_kernel_system::<F>(table);
    let kernel_dim = m - ech.rank();
    let kernel_witnesses = (0..m)
        .filter(|&g| (0..nn).all(|b| table.product(ParityCase::EvenOdd, g, b).is_empty()))
        .map(|g| table.even_basis()[g].clone())
        .collect();
    let right: Vec<SparseRows<F>> = (0..m).map(|g| right_sparse(table, g)).collect();
    let commutant_dim = sparse_intertwiner_dim(&right, &right, nn, nn)?;
    let image_dim = m - kernel_dim;
    Ok(PsiReport {
        kernel_dim,
        kernel_witnesses,
        image_dim,
        commutant_dim,
        iso: kernel_dim == 0 && image_dim == commutant_dim,
    })
}

/// Both analyses for one `(n,d)`, as emitted by the sweep command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulReport {
    pub n: usize,
    pub d: usize,
    pub field: FieldSpec,
    pub phi: PhiReport,
    pub psi: PsiReport,
}

pub fn koszul_report<F: Scalar>(n: usize, d: usize) -> Result<KoszulReport> {
    let table: Arc<StructureTable> = StructureTable::get(n, d)?;
    Ok(KoszulReport {
        n,
        d,
        field: F::field(),
        phi: phi_from_table::<F>(&table),
        psi: psi_from_table::<F>(&table)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Gf3, Rational};

    #[test]
    fn bimodule_small() {
        let b = bimodule_data::<Rational>(1, 1).unwrap();
        assert_eq!(b.left_mult.len(), 1);
        assert_eq!(b.left_mult[0], ExactMatrix::identity(1));
        assert_eq!(b.right_mult[0], ExactMatrix::identity(1));
        let b = bimodule_data::<Rational>(2, 3).unwrap();
        assert!(b.left_mult.iter().all(|m| m.rows() == 4 && m.cols() == 4));
    }

    #[test]
    fn left_and_right_actions_commute() {
        let b = bimodule_data::<Rational>(2, 2).unwrap();
        for l in &b.left_mult {
            for r in &b.right_mult {
                assert_eq!(l * r, r * l);
            }
        }
    }

    #[test]
    fn phi_small_cases() {
        let r = phi_analysis::<Rational>(2, 2).unwrap();
        assert!(r.iso, "{r:?}");
        let r = phi_analysis::<Rational>(1, 2).unwrap();
        assert_eq!(r.tensor_dim, 0);
        assert!(!r.iso);
        let r = phi_analysis::<Rational>(2, 4).unwrap();
        assert!(r.tensor_dim <= 1 && !r.iso);
        let r = phi_analysis::<Gf3>(2, 2).unwrap();
        assert!(r.iso, "{r:?}");
    }

    #[test]
    fn psi_small_cases() {
        assert!(psi_analysis::<Rational>(2, 2).unwrap().iso);
        let r = psi_analysis::<Rational>(2, 3).unwrap();
        assert!(!r.iso);
        let parallel = Multigraph::from_rows(&[vec![3, 0], vec![0, 0]]).unwrap();
        assert!(r.kernel_witnesses.contains(&parallel));
        assert_eq!(psi_kernel::<Rational>(2, 3).unwrap().len(), r.kernel_dim);
    }
}
