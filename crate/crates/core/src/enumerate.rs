//! Index sets `M(n,d)`, `N(n,d)`, `Λ(n,d)`, `B(n,d)` and orbit representatives.

use std::env;

use crate::error::{Error, Result};
use crate::graph::{standard_labelling, BallsConfig, Multigraph, SimpleGraph};

pub const MAX_CONFIGS_VAR: &str = "ALT_SCHUR_MAX_CONFIGS";
pub const MAX_BASIS_VAR: &str = "ALT_SCHUR_MAX_BASIS";

/// Computational limits. `max_configs` bounds `n^d` (the size of `B(n,d)`),
/// `max_basis` bounds `|M(n,d)| + |N(n,d)|` for full tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_configs: u128,
    pub max_basis: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_configs: 1_000_000,
            max_basis: 5000,
        }
    }
}

impl Budget {
    /// Defaults, overridden by `ALT_SCHUR_MAX_CONFIGS` / `ALT_SCHUR_MAX_BASIS` when set.
    pub fn from_env() -> Self {
        let read = |var: &str, default: u128| {
            env::var(var)
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .unwrap_or(default)
        };
        let d = Budget::default();
        Budget {
            max_configs: read(MAX_CONFIGS_VAR, d.max_configs),
            max_basis: read(MAX_BASIS_VAR, d.max_basis),
        }
    }

    pub fn check_configs(&self, n: usize, d: usize) -> Result<()> {
        let requested = pow_u128(n, d);
        if requested > self.max_configs {
            return Err(Error::BudgetExceeded {
                what: "n^d",
                requested,
                limit: self.max_configs,
            });
        }
        Ok(())
    }

    pub fn check_basis(&self, n: usize, d: usize) -> Result<()> {
        let requested = count_m(n, d).saturating_add(count_n(n, d));
        if requested > self.max_basis {
            return Err(Error::BudgetExceeded {
                what: "|M|+|N|",
                requested,
                limit: self.max_basis,
            });
        }
        Ok(())
    }
}

fn pow_u128(n: usize, d: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..d {
        acc = acc.saturating_mul(n as u128);
    }
    acc
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// `|M(n,d)| = C(n² + d − 1, d)`.
pub fn count_m(n: usize, d: usize) -> u128 {
    let cells = (n * n) as u128;
    if cells == 0 {
        return u128::from(d == 0);
    }
    binomial(cells + d as u128 - 1, d as u128)
}

/// `|N(n,d)| = C(n², d)`.
pub fn count_n(n: usize, d: usize) -> u128 {
    binomial((n * n) as u128, d as u128)
}

/// Vectors of length `len` with entries in `0..=cap` summing to `total`,
/// in increasing lexicographic order.
fn bounded_compositions(len: usize, total: usize, cap: usize) -> Vec<Vec<usize>> {
    fn rec(
        pos: usize,
        len: usize,
        left: usize,
        cap: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos + 1 == len {
            if left <= cap {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let slots_after = (len - pos - 1) * cap;
        let lo = left.saturating_sub(slots_after);
        for v in lo..=left.min(cap) {
            cur.push(v);
            rec(pos + 1, len, left - v, cap, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if len == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, len, total, cap, &mut Vec::with_capacity(len), &mut out);
    out
}

fn grids(n_up: usize, n_down: usize, d: usize, cap: usize) -> Vec<Multigraph> {
    bounded_compositions(n_up * n_down, d, cap)
        .into_iter()
        .map(|v| {
            let adj = v.into_iter().map(|x| x as u32).collect();
            Multigraph::from_flat(n_up, n_down, adj).expect("grid has the right length")
        })
        .collect()
}

/// `M(n,d)` in canonical order.
pub fn enum_m(n: usize, d: usize) -> Vec<Multigraph> {
    grids(n, n, d, d)
}

/// `M_d(m,n)`: multigraphs with `n` upper and `m` lower vertices.
pub fn enum_m_rect(m: usize, n: usize, d: usize) -> Vec<Multigraph> {
    grids(n, m, d, d)
}

/// `N(n,d)` in canonical order; empty when `n² < d`.
pub fn enum_n(n: usize, d: usize) -> Vec<SimpleGraph> {
    grids(n, n, d, 1)
        .into_iter()
        .map(|g| SimpleGraph::new(g).expect("0/1 grid"))
        .collect()
}

/// `Λ(n,d)`: weak compositions of `d` with `n` parts.
pub fn enum_lambda(n: usize, d: usize) -> Vec<Vec<usize>> {
    bounded_compositions(n, d, d)
}

/// Multigraphs with the given upper (row) and lower (column) degrees and
/// multiplicities at most `cap`, in canonical order.
pub fn contingency_tables(upper: &[usize], lower: &[usize], cap: usize) -> Vec<Multigraph> {
    let (rows, cols) = (upper.len(), lower.len());
    if upper.iter().sum::<usize>() != lower.iter().sum::<usize>() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut adj = vec![0u32; rows * cols];
    let mut col_left = lower.to_vec();
    #[allow(clippy::too_many_arguments)]
    fn fill_row(
        i: usize,
        rows: usize,
        cols: usize,
        upper: &[usize],
        cap: usize,
        adj: &mut Vec<u32>,
        col_left: &mut Vec<usize>,
        out: &mut Vec<Multigraph>,
    ) {
        if i == rows {
            if col_left.iter().all(|&c| c == 0) {
                out.push(Multigraph::from_flat(rows, cols, adj.clone()).expect("shape"));
            }
            return;
        }
        let row_caps: Vec<usize> = col_left.iter().map(|&c| c.min(cap)).collect();
        for row in bounded_rows(upper[i], &row_caps) {
            for (j, &v) in row.iter().enumerate() {
                adj[i * cols + j] = v as u32;
                col_left[j] -= v;
            }
            fill_row(i + 1, rows, cols, upper, cap, adj, col_left, out);
            for (j, &v) in row.iter().enumerate() {
                col_left[j] += v;
            }
        }
    }
    fill_row(0, rows, cols, upper, cap, &mut adj, &mut col_left, &mut out);
    out
}

/// Vectors `v` with `v[j] <= caps[j]` summing to `total`, lexicographically increasing.
fn bounded_rows(total: usize, caps: &[usize]) -> Vec<Vec<usize>> {
    let mut suffix = vec![0; caps.len() + 1];
    for j in (0..caps.len()).rev() {
        suffix[j] = suffix[j + 1] + caps[j];
    }
    let mut out = Vec::new();
    fn rec(
        j: usize,
        left: usize,
        caps: &[usize],
        suffix: &[usize],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if j == caps.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let lo = left.saturating_sub(suffix[j + 1]);
        for v in lo..=left.min(caps[j]) {
            cur.push(v);
            rec(j + 1, left - v, caps, suffix, cur, out);
            cur.pop();
        }
    }
    if total <= suffix[0] {
        rec(0, total, caps, &suffix, &mut Vec::new(), &mut out);
    }
    out
}

/// Streaming odometer over `B(n,d)`; the last ball moves fastest.
#[derive(Clone, Debug)]
pub struct BallsIter {
    n: usize,
    next: Option<Vec<usize>>,
}

impl BallsIter {
    /// Unchecked constructor; see [`enum_b`] for the budgeted one.
    pub fn new(n: usize, d: usize) -> Self {
        let next = (n > 0 || d == 0).then(|| vec![0; d]);
        BallsIter { n, next }
    }
}

impl Iterator for BallsIter {
    type Item = BallsConfig;

    fn next(&mut self) -> Option<BallsConfig> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut pos = succ.len();
        let mut advanced = false;
        while pos > 0 {
            pos -= 1;
            if succ[pos] + 1 < self.n {
                succ[pos] += 1;
                advanced = true;
                break;
            }
            succ[pos] = 0;
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(BallsConfig::new_unchecked(self.n, cur))
    }
}

/// `B(n,d)` in odometer order, refusing when `n^d` exceeds the budget.
pub fn enum_b(n: usize, d: usize, budget: &Budget) -> Result<BallsIter> {
    budget.check_configs(n, d)?;
    Ok(BallsIter::new(n, d))
}

/// The pair `(S, U)` read off the standard labelling: ball `s` on edge
/// `(i', j)` goes to box `j` of `S` and box `i` of `U`. Works for rectangular
/// graphs (`S` has `n_down` boxes, `U` has `n_up`).
pub fn representative_pair(g: &Multigraph) -> (BallsConfig, BallsConfig) {
    let l = standard_labelling(g);
    let s = l.edges().iter().map(|&(_, j)| j).collect();
    let u = l.edges().iter().map(|&(i, _)| i).collect();
    (
        BallsConfig::new_unchecked(g.n_down(), s),
        BallsConfig::new_unchecked(g.n_up(), u),
    )
}

/// `Σ_{λ ∈ Λ(n,d)} Π_i C(n, λ_i)`, which equals `|N(n,d)|`.
pub fn wedge_dimension_sum(n: usize, d: usize) -> u128 {
    enum_lambda(n, d)
        .iter()
        .map(|lam| lam.iter().map(|&p| binomial(n as u128, p as u128)).product::<u128>())
        .sum()
}
