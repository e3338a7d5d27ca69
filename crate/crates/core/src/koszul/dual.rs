use super::module::{SModule, Validation};
use super::{coeff, left_sparse};
use crate::algebra::{ParityCase, StructureTable};
use crate::error::Result;
use crate::linalg::{intertwiner_space, sparse_transpose, ExactMatrix, SparseEchelon};
use crate::scalar::Scalar;

/// `D(M) = S⁻ ⊗_S M` with its quotient presentation. The ambient space has
/// basis `ζ_a ⊗ e_k` at index `a·dim M + k`; the quotient basis is the set of
/// free columns of the relation echelon form.
#[derive(Clone, Debug)]
pub struct KoszulDual<F: Scalar> {
    module: SModule<F>,
    basis: Vec<(usize, usize)>,
    echelon: SparseEchelon<F>,
    free: Vec<usize>,
    base_dim: usize,
}

impl<F: Scalar> KoszulDual<F> {
    pub fn module(&self) -> &SModule<F> {
        &self.module
    }

    pub fn into_module(self) -> SModule<F> {
        self.module
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// `(a, k)` such that basis vector `q` is the class of `ζ_a ⊗ e_k`.
    pub fn basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    /// Coordinates of the class of `Σ c · ζ_a ⊗ e_k`, terms given as `((a, k), c)`.
    pub fn project(&self, v: impl IntoIterator<Item = ((usize, usize), F)>) -> Vec<F> {
        let dim = self.base_dim;
        self.echelon
            .project(v.into_iter().map(|((a, k), c)| (a * dim + k, c)), &self.free)
    }
}

/// The Koszul dual `D(M) = S⁻ ⊗_S M`.
pub fn koszul_dual<F: Scalar>(m: &SModule<F>) -> Result<KoszulDual<F>> {
    let table = StructureTable::get(m.n(), m.d())?;
    let (nn, dim) = (table.odd_dim(), m.dim());
    let columns: Vec<_> = m
        .sparse_action()
        .iter()
        .map(|rows| sparse_transpose(rows, dim))
        .collect();
    let mut echelon = SparseEchelon::new(nn * dim);
    for g in super::idempotents_first(&table) {
        for a in 0..nn {
            for k in 0..dim {
                // (ζ_a ξ_g) ⊗ e_k − ζ_a ⊗ (ξ_g e_k)
                let rel = table
                    .product(ParityCase::OddEven, a, g)
                    .iter()
                    .map(|&(t, c)| (t as usize * dim + k, coeff::<F>(c)))
                    .chain(columns[g][k].iter().map(|(l, x)| (a * dim + l, -x.clone())));
                echelon.insert(rel);
            }
        }
    }
    let free = echelon.free_columns();
    let basis: Vec<(usize, usize)> = free.iter().map(|&c| (c / dim, c % dim)).collect();
    let qdim = free.len();
    let action = (0..table.even_dim())
        .map(|h| {
            let mut x = ExactMatrix::zeros(qdim, qdim);
            for (q, &(a, k)) in basis.iter().enumerate() {
                let image = table
                    .product(ParityCase::EvenOdd, h, a)
                    .iter()
                    .map(|&(t, c)| (t as usize * dim + k, coeff::<F>(c)));
                for (r, y) in echelon.project(image, &free).into_iter().enumerate() {
                    x.set(r, q, y);
                }
            }
            x
        })
        .collect();
    let module = SModule::new(m.n(), m.d(), qdim, action, Validation::auto(table.even_dim()))?;
    Ok(KoszulDual {
        module,
        basis,
        echelon,
        free,
        base_dim: dim,
    })
}

/// `η_M: D²(M) → M`, induced by `φ` on the outer two tensor factors.
#[derive(Clone, Debug)]
pub struct EtaMap<F: Scalar> {
    /// `dim M × dim D²(M)`.
    pub matrix: ExactMatrix<F>,
    pub iso: bool,
}

pub fn eta_map<F: Scalar>(m: &SModule<F>) -> Result<EtaMap<F>> {
    let table = StructureTable::get(m.n(), m.d())?;
    let first = koszul_dual(m)?;
    let second = koszul_dual(first.module())?;
    let dim = m.dim();
    let mut matrix = ExactMatrix::zeros(dim, second.dim());
    for (col, &(a, q)) in second.basis().iter().enumerate() {
        // ζ_a ⊗ (ζ_b ⊗ e_k) ↦ φ(ζ_a ⊗ ζ_b) e_k
        let (b, k) = first.basis()[q];
        for &(t, c) in table.product(ParityCase::OddOdd, a, b) {
            let c = coeff::<F>(c);
            for r in 0..dim {
                let x = m.action()[t as usize].get(r, k);
                if !x.is_zero() {
                    matrix.add_at(r, col, c.clone() * x.clone());
                }
            }
        }
    }
    let iso = dim == second.dim() && matrix.rank() == dim;
    Ok(EtaMap { matrix, iso })
}

/// `Hom_S(S⁻, M)` with `ξ_g` acting by `h ↦ h ∘ (ζ ↦ ζ ξ_g)`.
#[derive(Clone, Debug)]
pub struct RingelDual<F: Scalar> {
    pub module: SModule<F>,
    /// The homomorphisms `S⁻ → M` (as `dim M × |N|` matrices) forming the basis.
    pub basis: Vec<ExactMatrix<F>>,
}

pub fn ringel_dual<F: Scalar>(m: &SModule<F>) -> Result<RingelDual<F>> {
    let table = StructureTable::get(m.n(), m.d())?;
    let nn = table.odd_dim();
    let left: Vec<ExactMatrix<F>> = (0..table.even_dim())
        .map(|g| super::dense(&left_sparse::<F>(&table, g), nn))
        .collect();
    let (basis, free) = intertwiner_space(&left, m.action(), nn, m.dim())?;
    let rdim = basis.len();
    let action = (0..table.even_dim())
        .map(|g| {
            let right = super::dense(&super::right_sparse::<F>(&table, g), nn);
            let mut x = ExactMatrix::zeros(rdim, rdim);
            for (q, h) in basis.iter().enumerate() {
                let image = h * &right;
                for (r, &pos) in free.iter().enumerate() {
                    x.set(r, q, image.entries()[pos].clone());
                }
            }
            x
        })
        .collect();
    let module = SModule::new(m.n(), m.d(), rdim, action, Validation::auto(table.even_dim()))?;
    Ok(RingelDual { module, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enum_lambda;
    use crate::koszul::{find_isomorphism, hom_space};
    use crate::scalar::Rational;

    #[test]
    fn dual_dimensions() {
        let s = SModule::<Rational>::regular(2, 2).unwrap();
        let d1 = koszul_dual(&s).unwrap();
        assert_eq!(d1.dim(), 6);
        let d2 = koszul_dual(d1.module()).unwrap();
        assert_eq!(d2.dim(), 10);
        let z = SModule::<Rational>::zero(2, 2).unwrap();
        assert_eq!(koszul_dual(&z).unwrap().dim(), 0);
    }

    #[test]
    fn dual_of_regular_is_odd_part() {
        let s = SModule::<Rational>::regular(2, 2).unwrap();
        let d1 = koszul_dual(&s).unwrap();
        let odd = SModule::<Rational>::odd_left(2, 2).unwrap();
        assert!(find_isomorphism(d1.module(), &odd, 7).unwrap().is_some());
    }

    #[test]
    fn eta_cases() {
        let s = SModule::<Rational>::regular(2, 2).unwrap();
        assert!(eta_map(&s).unwrap().iso);
        for lambda in enum_lambda(2, 2) {
            let c = SModule::<Rational>::column(2, 2, &lambda).unwrap();
            assert!(eta_map(&c).unwrap().iso, "{lambda:?}");
        }
        assert!(eta_map(&SModule::<Rational>::zero(2, 2).unwrap()).unwrap().iso);
        let s = SModule::<Rational>::regular(2, 4).unwrap();
        assert!(!eta_map(&s).unwrap().iso);
    }

    #[test]
    fn eta_is_a_module_map() {
        let s = SModule::<Rational>::regular(2, 2).unwrap();
        let eta = eta_map(&s).unwrap();
        let d2 = koszul_dual(koszul_dual(&s).unwrap().module()).unwrap();
        for (g, a) in s.action().iter().enumerate() {
            assert_eq!(a * &eta.matrix, &eta.matrix * &d2.module().action()[g]);
        }
    }

    #[test]
    fn ringel_dual_dimensions() {
        let s = SModule::<Rational>::regular(2, 2).unwrap();
        let r = ringel_dual(&s).unwrap();
        assert_eq!(r.module.dim(), 6);
        let d = koszul_dual(&s).unwrap();
        assert_eq!(hom_space(d.module(), &s).unwrap().len(), r.module.dim());
        let z = SModule::<Rational>::zero(2, 2).unwrap();
        assert_eq!(ringel_dual(&z).unwrap().module.dim(), 0);
    }
}
