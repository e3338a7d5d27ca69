//! Bipartite (multi)graphs on the vertex set `[n'] ⊔ [n]`.
//!
//! Vertices are 0-based in the API. Row `i` of the adjacency grid is the
//! upper vertex `i'`, column `j` is the lower vertex `j`. Graphs are ordered
//! by shape and then lexicographically by their row-major adjacency grid;
//! that order fixes every basis ordering in the crate.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An edge `(i', j)` as `(upper, lower)`.
pub type Edge = (usize, usize);

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Multigraph {
    n_up: usize,
    n_down: usize,
    adj: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n_up: usize,
    n_down: usize,
    adj: Vec<Vec<u32>>,
}

impl TryFrom<GraphJson> for Multigraph {
    type Error = Error;
    fn try_from(g: GraphJson) -> Result<Self> {
        let m = Multigraph::from_rows(&g.adj)?;
        if m.n_up != g.n_up || (g.n_up > 0 && m.n_down != g.n_down) {
            return Err(Error::InvalidGraph(format!(
                "declared shape {}x{} does not match adjacency grid",
                g.n_up, g.n_down
            )));
        }
        Ok(Multigraph {
            n_up: g.n_up,
            n_down: g.n_down,
            adj: m.adj,
        })
    }
}

impl From<Multigraph> for GraphJson {
    fn from(g: Multigraph) -> Self {
        GraphJson {
            n_up: g.n_up,
            n_down: g.n_down,
            adj: g.rows(),
        }
    }
}

impl Multigraph {
    pub fn zero(n_up: usize, n_down: usize) -> Self {
        Multigraph {
            n_up,
            n_down,
            adj: vec![0; n_up * n_down],
        }
    }

    pub fn from_flat(n_up: usize, n_down: usize, adj: Vec<u32>) -> Result<Self> {
        if adj.len() != n_up * n_down {
            return Err(Error::InvalidGraph(format!(
                "adjacency of length {} for shape {n_up}x{n_down}",
                adj.len()
            )));
        }
        Ok(Multigraph { n_up, n_down, adj })
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let n_up = rows.len();
        let n_down = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_down) {
            return Err(Error::InvalidGraph("ragged adjacency grid".into()));
        }
        Ok(Multigraph {
            n_up,
            n_down,
            adj: rows.concat(),
        })
    }

    /// Graph with one edge per listed pair; repeated pairs add multiplicity.
    pub fn from_edges(n_up: usize, n_down: usize, edges: &[Edge]) -> Result<Self> {
        let mut g = Multigraph::zero(n_up, n_down);
        for &(i, j) in edges {
            if i >= n_up || j >= n_down {
                return Err(Error::InvalidGraph(format!(
                    "edge ({i}', {j}) outside {n_up}x{n_down}"
                )));
            }
            g.adj[i * n_down + j] += 1;
        }
        Ok(g)
    }

    pub fn n_up(&self) -> usize {
        self.n_up
    }

    pub fn n_down(&self) -> usize {
        self.n_down
    }

    /// Number of edges.
    pub fn degree(&self) -> usize {
        self.adj.iter().map(|&m| m as usize).sum()
    }

    pub fn mult(&self, i: usize, j: usize) -> u32 {
        self.adj[i * self.n_down + j]
    }

    pub fn flat(&self) -> &[u32] {
        &self.adj
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        if self.n_down == 0 {
            return vec![Vec::new(); self.n_up];
        }
        self.adj.chunks(self.n_down).map(<[u32]>::to_vec).collect()
    }

    /// Degrees of the upper vertices (row sums).
    pub fn upper_degrees(&self) -> Vec<usize> {
        (0..self.n_up)
            .map(|i| (0..self.n_down).map(|j| self.mult(i, j) as usize).sum())
            .collect()
    }

    /// Degrees of the lower vertices (column sums).
    pub fn lower_degrees(&self) -> Vec<usize> {
        (0..self.n_down)
            .map(|j| (0..self.n_up).map(|i| self.mult(i, j) as usize).sum())
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        self.adj.iter().all(|&m| m <= 1)
    }

    pub fn to_simple(&self) -> Option<SimpleGraph> {
        self.is_simple().then(|| SimpleGraph(self.clone()))
    }

    /// Edges in lexicographic order (upper index first), each listed as
    /// often as its multiplicity.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.degree());
        for i in 0..self.n_up {
            for j in 0..self.n_down {
                for _ in 0..self.mult(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Horizontal reflection: `i'` joins `j` in the result iff `j'` joins `i` here.
    pub fn star(&self) -> Multigraph {
        let mut adj = vec![0; self.adj.len()];
        for i in 0..self.n_up {
            for j in 0..self.n_down {
                adj[j * self.n_up + i] = self.mult(i, j);
            }
        }
        Multigraph {
            n_up: self.n_down,
            n_down: self.n_up,
            adj,
        }
    }

    /// `prod(m!)` over the edge multiplicities: the size of the stabiliser of
    /// any labelling under relabelling of balls.
    pub fn multiplicity_factorial(&self) -> u128 {
        self.adj
            .iter()
            .map(|&m| (1..=m as u128).product::<u128>())
            .product()
    }
}

impl fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(u32::to_string).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// A bipartite graph with all multiplicities in `{0, 1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Multigraph", into = "Multigraph")]
pub struct SimpleGraph(Multigraph);

impl TryFrom<Multigraph> for SimpleGraph {
    type Error = Error;
    fn try_from(g: Multigraph) -> Result<Self> {
        SimpleGraph::new(g)
    }
}

impl From<SimpleGraph> for Multigraph {
    fn from(g: SimpleGraph) -> Self {
        g.0
    }
}

impl SimpleGraph {
    pub fn new(g: Multigraph) -> Result<Self> {
        if !g.is_simple() {
            return Err(Error::InvalidGraph(format!("{g} has a multiple edge")));
        }
        Ok(SimpleGraph(g))
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        SimpleGraph::new(Multigraph::from_rows(rows)?)
    }

    pub fn from_edges(n_up: usize, n_down: usize, edges: &[Edge]) -> Result<Self> {
        SimpleGraph::new(Multigraph::from_edges(n_up, n_down, edges)?)
    }

    pub fn as_multigraph(&self) -> &Multigraph {
        &self.0
    }

    pub fn into_multigraph(self) -> Multigraph {
        self.0
    }

    pub fn star(&self) -> SimpleGraph {
        SimpleGraph(self.0.star())
    }

    /// Position of each edge in the standard labelling, as a row-major grid
    /// (`usize::MAX` where there is no edge).
    pub(crate) fn standard_index_grid(&self) -> Vec<usize> {
        let mut next = 0;
        self.0
            .adj
            .iter()
            .map(|&m| {
                if m == 1 {
                    next += 1;
                    next - 1
                } else {
                    usize::MAX
                }
            })
            .collect()
    }
}

impl Deref for SimpleGraph {
    type Target = Multigraph;
    fn deref(&self) -> &Multigraph {
        &self.0
    }
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl fmt::Display for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Assignment of each label (ball) `s` to an edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Labelling {
    edges: Vec<Edge>,
}

impl Labelling {
    pub fn new(edges: Vec<Edge>) -> Self {
        Labelling { edges }
    }

    /// Edge carrying label `s` (0-based).
    pub fn edge(&self, s: usize) -> Edge {
        self.edges[s]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Whether every edge of `g` receives exactly as many labels as its multiplicity.
    pub fn is_labelling_of(&self, g: &Multigraph) -> bool {
        self.edges.len() == g.degree()
            && self.edges.iter().all(|&(i, j)| i < g.n_up() && j < g.n_down())
            && Multigraph::from_edges(g.n_up(), g.n_down(), &self.edges)
                .is_ok_and(|h| &h == g)
    }

    /// Relabel by `w`: label `s` of the result sits where label `w[s]` sat.
    pub fn permuted(&self, w: &[usize]) -> Labelling {
        Labelling {
            edges: w.iter().map(|&s| self.edges[s]).collect(),
        }
    }
}

/// The labelling that enumerates edges in lexicographic order, upper index
/// first, repeating multiple edges.
pub fn standard_labelling(g: &Multigraph) -> Labelling {
    Labelling::new(g.edges())
}

/// Parity of a permutation given as an image vector.
pub fn permutation_sign(p: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            if p[a] > p[b] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub(crate) fn is_permutation(w: &[usize]) -> bool {
    let mut seen = vec![false; w.len()];
    for &x in w {
        if x >= w.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Sign of the permutation relating `l` to the standard labelling of `g`.
pub fn labelling_sign(g: &SimpleGraph, l: &Labelling) -> Result<i64> {
    if !l.is_labelling_of(g) {
        return Err(Error::InvalidLabelling(format!(
            "{:?} is not a labelling of {g}",
            l.edges()
        )));
    }
    let idx = g.standard_index_grid();
    let perm: Vec<usize> = l
        .edges()
        .iter()
        .map(|&(i, j)| idx[i * g.n_down() + j])
        .collect();
    Ok(permutation_sign(&perm))
}

/// A configuration of `d` numbered balls in `n` numbered boxes, stored as the
/// box of each ball (both 0-based).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BallsConfig {
    n: usize,
    box_of: Vec<usize>,
}

impl BallsConfig {
    pub fn new(n: usize, box_of: Vec<usize>) -> Result<Self> {
        if let Some(&b) = box_of.iter().find(|&&b| b >= n) {
            return Err(Error::InvalidGraph(format!("box {b} out of range for n = {n}")));
        }
        Ok(BallsConfig { n, box_of })
    }

    pub(crate) fn new_unchecked(n: usize, box_of: Vec<usize>) -> Self {
        BallsConfig { n, box_of }
    }

    /// From the set-partition view: `boxes[j]` lists the balls in box `j`.
    pub fn from_boxes(boxes: &[Vec<usize>]) -> Result<Self> {
        let d: usize = boxes.iter().map(Vec::len).sum();
        let mut box_of = vec![usize::MAX; d];
        for (j, content) in boxes.iter().enumerate() {
            for &s in content {
                if s >= d || box_of[s] != usize::MAX {
                    return Err(Error::InvalidGraph(format!(
                        "boxes {boxes:?} do not partition the balls 0..{d}"
                    )));
                }
                box_of[s] = j;
            }
        }
        Ok(BallsConfig {
            n: boxes.len(),
            box_of,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.box_of.len()
    }

    pub fn box_of(&self, ball: usize) -> usize {
        self.box_of[ball]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.box_of
    }

    pub fn boxes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for (s, &b) in self.box_of.iter().enumerate() {
            out[b].push(s);
        }
        out
    }

    pub fn box_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for &b in &self.box_of {
            out[b] += 1;
        }
        out
    }

    /// Right action of `w ∈ S_d`: `(i_1, …, i_d)·w = (i_{w(1)}, …, i_{w(d)})`.
    pub fn act(&self, w: &[usize]) -> BallsConfig {
        BallsConfig {
            n: self.n,
            box_of: w.iter().map(|&s| self.box_of[s]).collect(),
        }
    }

    /// Position in odometer order (ball 0 is the most significant digit).
    pub fn index(&self) -> usize {
        self.box_of.iter().fold(0, |acc, &b| acc * self.n + b)
    }

    pub fn from_index(n: usize, d: usize, mut idx: usize) -> Self {
        let mut box_of = vec![0; d];
        for s in (0..d).rev() {
            box_of[s] = idx % n;
            idx /= n;
        }
        BallsConfig { n, box_of }
    }
}

fn check_pair(s: &BallsConfig, t: &BallsConfig) -> Result<()> {
    if s.d() != t.d() {
        return Err(Error::shape(format!(
            "configurations hold {} and {} balls",
            s.d(),
            t.d()
        )));
    }
    Ok(())
}

/// Underlying multigraph of `γ_{S,T}`: `|S_j ∩ T_i|` edges join `i'` and `j`.
/// The upper row is indexed by the boxes of `t`, the lower row by those of `s`.
pub fn pair_multigraph(s: &BallsConfig, t: &BallsConfig) -> Result<Multigraph> {
    check_pair(s, t)?;
    Ok(pair_multigraph_unchecked(s, t))
}

pub(crate) fn pair_multigraph_unchecked(s: &BallsConfig, t: &BallsConfig) -> Multigraph {
    let mut g = Multigraph::zero(t.n, s.n);
    for (a, b) in t.box_of.iter().zip(&s.box_of) {
        g.adj[a * s.n + b] += 1;
    }
    g
}

/// `Γ_{S,T}` together with its ball labelling: ball `k` labels `(T(k)', S(k))`.
pub fn pair_graph(s: &BallsConfig, t: &BallsConfig) -> Result<(Multigraph, Labelling)> {
    let g = pair_multigraph(s, t)?;
    let l = Labelling::new(t.box_of.iter().copied().zip(s.box_of.iter().copied()).collect());
    Ok((g, l))
}

/// `ε(γ_{S,T})`; fails with [`Error::NonTransverse`] when two balls share an edge.
pub fn pair_sign(s: &BallsConfig, t: &BallsConfig) -> Result<i64> {
    let (g, l) = pair_graph(s, t)?;
    let Some(simple) = g.to_simple() else {
        let edges = l.edges();
        for a in 0..edges.len() {
            for b in a + 1..edges.len() {
                if edges[a] == edges[b] {
                    return Err(Error::NonTransverse(a, b));
                }
            }
        }
        unreachable!("non-simple graph has a repeated edge");
    };
    labelling_sign(&simple, &l)
}

fn require_square_n_ge_d(g: &Multigraph) -> Result<usize> {
    if g.n_up() != g.n_down() {
        return Err(Error::shape("graph must be square"));
    }
    let (n, d) = (g.n_up(), g.degree());
    if n < d {
        return Err(Error::RequiresNAtLeastD { n, d });
    }
    Ok(n)
}

/// `D(Γ)`: an edge `(i', s)` for every edge `(i', j)` carrying standard label `s`.
pub fn d_of(g: &Multigraph) -> Result<SimpleGraph> {
    let n = require_square_n_ge_d(g)?;
    let edges: Vec<Edge> = g
        .edges()
        .into_iter()
        .enumerate()
        .map(|(s, (i, _))| (i, s))
        .collect();
    SimpleGraph::from_edges(n, n, &edges)
}

/// `U(Γ)`: an edge `(s', j)` for every edge `(i', j)` carrying standard label `s`.
pub fn u_of(g: &Multigraph) -> Result<SimpleGraph> {
    let n = require_square_n_ge_d(g)?;
    let edges: Vec<Edge> = g
        .edges()
        .into_iter()
        .enumerate()
        .map(|(s, (_, j))| (s, j))
        .collect();
    SimpleGraph::from_edges(n, n, &edges)
}

/// Glues `down` on top of `up`: `(i', j)` gets one edge per middle vertex `k`
/// with `(i', k)` in `down` and `(k', j)` in `up`.
pub fn glue(up: &Multigraph, down: &Multigraph) -> Result<Multigraph> {
    if down.n_down() != up.n_up() {
        return Err(Error::shape("middle vertex sets differ"));
    }
    let mut g = Multigraph::zero(down.n_up(), up.n_down());
    for i in 0..down.n_up() {
        for j in 0..up.n_down() {
            let c: u32 = (0..down.n_down())
                .map(|k| down.mult(i, k) * up.mult(k, j))
                .sum();
            g.adj[i * up.n_down() + j] = c;
        }
    }
    Ok(g)
}

fn check_composition(lambda: &[usize], n: usize) -> Result<usize> {
    if lambda.len() > n {
        return Err(Error::InvalidComposition(format!(
            "{lambda:?} has more than {n} parts"
        )));
    }
    Ok(lambda.iter().sum())
}

/// `Γ_λ`: lower vertex `j` is joined to the upper vertices
/// `λ_0 + … + λ_{j-1} ≤ i < λ_0 + … + λ_j`. Its upper degrees are `(1^d, 0^{n-d})`
/// and its lower degrees are `λ`, so that `ζ_{Γ_λ} ζ_{Γ_λ^*}` is supported on `Γ^0_λ`.
pub fn gamma_lambda(lambda: &[usize], n: usize) -> Result<SimpleGraph> {
    let d = check_composition(lambda, n)?;
    if n < d {
        return Err(Error::RequiresNAtLeastD { n, d });
    }
    let mut edges = Vec::with_capacity(d);
    let mut start = 0;
    for (j, &part) in lambda.iter().enumerate() {
        for i in start..start + part {
            edges.push((i, j));
        }
        start += part;
    }
    SimpleGraph::from_edges(n, n, &edges)
}

/// `Γ^0_λ`: `λ_i` parallel edges between `i'` and `i`.
pub fn gamma0_lambda(lambda: &[usize], n: usize) -> Result<Multigraph> {
    check_composition(lambda, n)?;
    let mut g = Multigraph::zero(n, n);
    for (i, &part) in lambda.iter().enumerate() {
        g.adj[i * n + i] = part as u32;
    }
    Ok(g)
}

/// `Γ(w)`: edges `(i', w(i))` for `i < d`, where `w` permutes `0..d`.
pub fn gamma_perm(w: &[usize], n: usize) -> Result<SimpleGraph> {
    if !is_permutation(w) {
        return Err(Error::InvalidPermutation(format!("{w:?}")));
    }
    if n < w.len() {
        return Err(Error::RequiresNAtLeastD { n, d: w.len() });
    }
    let edges: Vec<Edge> = w.iter().enumerate().map(|(i, &j)| (i, j)).collect();
    SimpleGraph::from_edges(n, n, &edges)
}

/// `F_{n,n}`: every upper vertex joined to every lower vertex.
pub fn complete_bipartite(n: usize) -> SimpleGraph {
    SimpleGraph(Multigraph {
        n_up: n,
        n_down: n,
        adj: vec![1; n * n],
    })
}
