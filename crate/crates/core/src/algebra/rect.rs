use std::collections::BTreeMap;

use super::convolve;
use crate::error::Result;
use crate::graph::Multigraph;

/// Composition in the Schur category: `g1` has `m` upper vertices and `g2`
/// has `m` lower vertices; the result counts middle configurations in
/// `B(m,d)` exactly as in the square algebra.
pub fn rect_compose(g1: &Multigraph, g2: &Multigraph) -> Result<BTreeMap<Multigraph, i64>> {
    convolve(g1, false, g2, false)
}
