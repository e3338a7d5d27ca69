//! Dense and sparse exact linear algebra.
//!
//! Dense matrices are reduced with first-nonzero pivoting in column order, so
//! echelon forms and kernel bases are deterministic. Large relation systems
//! go through [`SparseEchelon`], which keeps every pivot row sparse and only
//! ever touches the pivot rows a new vector actually meets.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> ExactMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(ExactMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(ExactMatrix {
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| F::from_i64(x)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::LengthMismatch {
                    expected: rows,
                    found: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: F) {
        let slot = &mut self.data[i * self.cols + j];
        *slot = slot.clone() + v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &F) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::shape(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, a.clone() * b.clone());
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inverse().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let pr = m.get(r, j).clone();
                    if !pr.is_zero() {
                        let v = m.get(i, j).clone() - f.clone() * pr;
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        kernel_basis(self)
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> ExactMatrix<G> {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Columns `j` with a nonzero entry, grouped per row.
    pub fn sparse_rows(&self) -> Vec<Vec<(usize, F)>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (j, x.clone()))
                    .collect()
            })
            .collect()
    }
}

impl<F: Scalar> Mul for &ExactMatrix<F> {
    type Output = ExactMatrix<F>;

    fn mul(self, rhs: Self) -> ExactMatrix<F> {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl<F: Scalar> fmt::Debug for ExactMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Exact rank over the field of `m`.
pub fn rank<F: Scalar>(m: &ExactMatrix<F>) -> usize {
    m.rref().1.len()
}

/// Basis of the right null space. Each basis vector has a 1 in one free
/// column and 0 in the others, free columns taken in increasing order.
pub fn kernel_basis<F: Scalar>(m: &ExactMatrix<F>) -> Vec<Vec<F>> {
    let (r, pivots) = m.rref();
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![F::zero(); m.cols];
            v[free] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, free).clone();
            }
            v
        })
        .collect()
}

/// Dimension of `F^ambient_dim` modulo the span of `relations`.
pub fn quotient_dim<F: Scalar>(ambient_dim: usize, relations: &[Vec<F>]) -> Result<usize> {
    let mut ech = SparseEchelon::new(ambient_dim);
    for rel in relations {
        if rel.len() != ambient_dim {
            return Err(Error::LengthMismatch {
                expected: ambient_dim,
                found: rel.len(),
            });
        }
        ech.insert(
            rel.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone())),
        );
    }
    Ok(ambient_dim - ech.rank())
}

/// Incrementally built row echelon form with sparse rows.
///
/// Every stored row is normalised to have leading coefficient 1 at its pivot
/// column and no entries to the left of it.
#[derive(Clone, Debug)]
pub struct SparseEchelon<F> {
    dim: usize,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<Vec<(usize, F)>>,
}

impl<F: Scalar> SparseEchelon<F> {
    pub fn new(dim: usize) -> Self {
        SparseEchelon {
            dim,
            pivot_row: vec![None; dim],
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// Columns without a pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.dim).filter(|&c| !self.is_pivot(c)).collect()
    }

    fn reduce_map(&self, mut v: BTreeMap<usize, F>) -> BTreeMap<usize, F> {
        let mut cursor = 0;
        loop {
            let next = v
                .range(cursor..)
                .find(|(k, _)| self.pivot_row[**k].is_some())
                .map(|(k, c)| (*k, c.clone()));
            let Some((p, c)) = next else { break };
            let row = &self.rows[self.pivot_row[p].expect("pivot")];
            for (col, x) in row {
                let cur = v.remove(col).unwrap_or_else(F::zero);
                let upd = cur - c.clone() * x.clone();
                if !upd.is_zero() {
                    v.insert(*col, upd);
                }
            }
            cursor = p + 1;
        }
        v
    }

    fn collect(&self, v: impl IntoIterator<Item = (usize, F)>) -> BTreeMap<usize, F> {
        let mut map: BTreeMap<usize, F> = BTreeMap::new();
        for (i, x) in v {
            assert!(i < self.dim, "index {i} out of range for dimension {}", self.dim);
            if x.is_zero() {
                continue;
            }
            let cur = map.remove(&i).unwrap_or_else(F::zero);
            let s = cur + x;
            if !s.is_zero() {
                map.insert(i, s);
            }
        }
        map
    }

    /// Reduces `v` against the stored rows; returns the sorted remainder.
    pub fn reduce(&self, v: impl IntoIterator<Item = (usize, F)>) -> Vec<(usize, F)> {
        self.reduce_map(self.collect(v)).into_iter().collect()
    }

    /// Whether `v` lies in the span of the stored rows.
    pub fn contains(&self, v: impl IntoIterator<Item = (usize, F)>) -> bool {
        self.reduce_map(self.collect(v)).is_empty()
    }

    /// Adds `v` to the span. Returns `true` if the rank grew.
    pub fn insert(&mut self, v: impl IntoIterator<Item = (usize, F)>) -> bool {
        let rem = self.reduce_map(self.collect(v));
        let Some((&p, lead)) = rem.iter().next() else {
            return false;
        };
        let inv = lead.inverse().expect("leading entry is nonzero");
        let row: Vec<(usize, F)> = rem
            .into_iter()
            .map(|(c, x)| (c, x * inv.clone()))
            .collect();
        self.pivot_row[p] = Some(self.rows.len());
        self.rows.push(row);
        true
    }

    /// Coordinates of `v + span` in the quotient, read on [`Self::free_columns`].
    pub fn project(&self, v: impl IntoIterator<Item = (usize, F)>, free: &[usize]) -> Vec<F> {
        let rem = self.reduce_map(self.collect(v));
        free.iter()
            .map(|c| rem.get(c).cloned().unwrap_or_else(F::zero))
            .collect()
    }

    /// Basis of `{x : r . x = 0 for every stored row r}`, one vector per
    /// free column (1 there, 0 at the other free columns).
    pub fn nullspace_basis(&self) -> Vec<Vec<F>> {
        let mut pivots: Vec<usize> = (0..self.dim).filter(|&c| self.is_pivot(c)).collect();
        pivots.reverse();
        self.free_columns()
            .into_iter()
            .map(|free| {
                let mut x = vec![F::zero(); self.dim];
                x[free] = F::one();
                for &p in &pivots {
                    let row = &self.rows[self.pivot_row[p].expect("pivot")];
                    let mut acc = F::zero();
                    for (c, a) in row.iter().skip(1) {
                        if !x[*c].is_zero() {
                            acc = acc + a.clone() * x[*c].clone();
                        }
                    }
                    x[p] = -acc;
                }
                x
            })
            .collect()
    }
}

/// All matrices `X` (of shape `dst_dim x src_dim`) with `X * src[g] = dst[g] * X`
/// for every index `g`. Generators with the sparsest equations are processed
/// first so that idempotent-style constraints prune the system early.
pub fn intertwiners<F: Scalar>(
    src: &[ExactMatrix<F>],
    dst: &[ExactMatrix<F>],
    src_dim: usize,
    dst_dim: usize,
) -> Result<Vec<ExactMatrix<F>>> {
    let ech = intertwiner_system(src, dst, src_dim, dst_dim)?;
    ech.nullspace_basis()
        .into_iter()
        .map(|v| ExactMatrix::from_vec(dst_dim, src_dim, v))
        .collect()
}

/// Intertwiner basis together with the unknown positions it is
/// parametrised by: any solution `X` has coordinates `X.entries()[free[k]]`.
pub fn intertwiner_space<F: Scalar>(
    src: &[ExactMatrix<F>],
    dst: &[ExactMatrix<F>],
    src_dim: usize,
    dst_dim: usize,
) -> Result<(Vec<ExactMatrix<F>>, Vec<usize>)> {
    let ech = intertwiner_system(src, dst, src_dim, dst_dim)?;
    let basis = ech
        .nullspace_basis()
        .into_iter()
        .map(|v| ExactMatrix::from_vec(dst_dim, src_dim, v))
        .collect::<Result<Vec<_>>>()?;
    Ok((basis, ech.free_columns()))
}

/// Dimension of the intertwiner space without materialising a basis.
pub fn intertwiner_dim<F: Scalar>(
    src: &[ExactMatrix<F>],
    dst: &[ExactMatrix<F>],
    src_dim: usize,
    dst_dim: usize,
) -> Result<usize> {
    let ech = intertwiner_system(src, dst, src_dim, dst_dim)?;
    Ok(ech.dim() - ech.rank())
}

fn intertwiner_system<F: Scalar>(
    src: &[ExactMatrix<F>],
    dst: &[ExactMatrix<F>],
    src_dim: usize,
    dst_dim: usize,
) -> Result<SparseEchelon<F>> {
    for (a, b) in src.iter().zip(dst) {
        if a.rows != src_dim || a.cols != src_dim || b.rows != dst_dim || b.cols != dst_dim {
            return Err(Error::shape("intertwiner generator has the wrong size"));
        }
    }
    let src: Vec<SparseRows<F>> = src.iter().map(ExactMatrix::sparse_rows).collect();
    let dst: Vec<SparseRows<F>> = dst.iter().map(ExactMatrix::sparse_rows).collect();
    sparse_intertwiner_system(&src, &dst, src_dim, dst_dim)
}

/// Matrix given by its nonzero entries, row by row.
pub type SparseRows<F> = Vec<Vec<(usize, F)>>;

pub(crate) fn sparse_transpose<F: Scalar>(rows: &SparseRows<F>, cols: usize) -> SparseRows<F> {
    let mut out = vec![Vec::new(); cols];
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row {
            out[*j].push((i, x.clone()));
        }
    }
    out
}

/// [`intertwiner_dim`] for generators given as sparse rows.
pub fn sparse_intertwiner_dim<F: Scalar>(
    src: &[SparseRows<F>],
    dst: &[SparseRows<F>],
    src_dim: usize,
    dst_dim: usize,
) -> Result<usize> {
    let ech = sparse_intertwiner_system(src, dst, src_dim, dst_dim)?;
    Ok(ech.dim() - ech.rank())
}

fn sparse_intertwiner_system<F: Scalar>(
    src: &[SparseRows<F>],
    dst: &[SparseRows<F>],
    src_dim: usize,
    dst_dim: usize,
) -> Result<SparseEchelon<F>> {
    if src.len() != dst.len() {
        return Err(Error::LengthMismatch {
            expected: src.len(),
            found: dst.len(),
        });
    }
    for (a, b) in src.iter().zip(dst) {
        if a.len() != src_dim || b.len() != dst_dim {
            return Err(Error::shape("intertwiner generator has the wrong size"));
        }
    }
    let nnz = |m: &SparseRows<F>| m.iter().map(Vec::len).sum::<usize>();
    // Unknown X[i][k] lives at index i * src_dim + k.
    let mut ech = SparseEchelon::new(dst_dim * src_dim);
    let mut order: Vec<usize> = (0..src.len()).collect();
    order.sort_by_key(|&g| nnz(&src[g]) + nnz(&dst[g]));
    for g in order {
        let a_cols = sparse_transpose(&src[g], src_dim);
        let b_rows = &dst[g];
        for i in 0..dst_dim {
            for j in 0..src_dim {
                // (X A)[i][j] - (B X)[i][j]
                let mut eq: Vec<(usize, F)> = Vec::new();
                for (k, a) in &a_cols[j] {
                    eq.push((i * src_dim + k, a.clone()));
                }
                for (k, b) in &b_rows[i] {
                    eq.push((k * src_dim + j, -b.clone()));
                }
                if !eq.is_empty() {
                    ech.insert(eq);
                }
            }
        }
    }
    Ok(ech)
}
