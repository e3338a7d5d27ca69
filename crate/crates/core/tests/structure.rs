//! Structure constants against the labelling description, plus algebra-level
//! properties (associativity, grading, anti-involution) on whole bases.

use std::collections::HashMap;

use num_traits::Zero;

use alt_schur::algebra::{anti_involution, multiply, BasisSymbol, GradedElement, Parity, StructureTable};
use alt_schur::enumerate::{enum_m, enum_n, Budget};
use alt_schur::graph::{labelling_sign, standard_labelling, Labelling, Multigraph};
use alt_schur::oracle::element_matrix;
use alt_schur::{Gf5, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Edge = (usize, usize);

/// Every labelling of `g`: each distinct arrangement of its edge multiset.
fn labellings(g: &Multigraph) -> Vec<Vec<Edge>> {
    fn go(counts: &mut Vec<(Edge, u32)>, cur: &mut Vec<Edge>, d: usize, out: &mut Vec<Vec<Edge>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in 0..counts.len() {
            if counts[i].1 > 0 {
                counts[i].1 -= 1;
                cur.push(counts[i].0);
                go(counts, cur, d, out);
                cur.pop();
                counts[i].1 += 1;
            }
        }
    }
    let mut counts: Vec<(Edge, u32)> = Vec::new();
    for e in g.edges() {
        match counts.last_mut() {
            Some((last, c)) if *last == e => *c += 1,
            _ => counts.push((e, 1)),
        }
    }
    let mut out = Vec::new();
    go(&mut counts, &mut Vec::new(), g.degree(), &mut out);
    out
}

/// `(l1, l2)` is compatible with `l` when, ball by ball, the upper end of
/// `l1(s)` is the lower end of `l2(s)` and `l(s)` joins the upper end of
/// `l2(s)` to the lower end of `l1(s)`.
fn compatible(l: &[Edge], l1: &[Edge], l2: &[Edge]) -> bool {
    l.iter()
        .zip(l1.iter().zip(l2))
        .all(|(&(u, w), (&(u1, w1), &(u2, w2)))| u1 == w2 && u == u2 && w == w1)
}

struct LabellingOracle {
    labellings: HashMap<BasisSymbol, Vec<(Vec<Edge>, i64)>>,
}

impl LabellingOracle {
    fn new(table: &StructureTable) -> Self {
        let labellings = table
            .symbols()
            .into_iter()
            .map(|b| {
                let ls = labellings(b.graph())
                    .into_iter()
                    .map(|l| {
                        let sign = match &b {
                            BasisSymbol::Odd(g) => labelling_sign(g, &Labelling::new(l.clone())).unwrap(),
                            BasisSymbol::Even(_) => 1,
                        };
                        (l, sign)
                    })
                    .collect();
                (b, ls)
            })
            .collect();
        LabellingOracle { labellings }
    }

    /// Signed count of compatible pairs for the target labelling `l`.
    fn coefficient(&self, b1: &BasisSymbol, b2: &BasisSymbol, l: &[Edge]) -> i64 {
        let mut total = 0;
        for (l1, e1) in &self.labellings[b1] {
            for (l2, e2) in &self.labellings[b2] {
                if compatible(l, l1, l2) {
                    total += e1 * e2;
                }
            }
        }
        total
    }
}

fn target_basis(n: usize, d: usize, parity: Parity) -> Vec<BasisSymbol> {
    match parity {
        Parity::Even => enum_m(n, d).into_iter().map(BasisSymbol::Even).collect(),
        Parity::Odd => enum_n(n, d).into_iter().map(BasisSymbol::Odd).collect(),
    }
}

fn check_pair(table: &StructureTable, oracle: &LabellingOracle, b1: &BasisSymbol, b2: &BasisSymbol) {
    let (n, d) = (table.n(), table.d());
    let got = table.constants(b1, b2).unwrap();
    for t in target_basis(n, d, b1.parity().combine(b2.parity())) {
        let l = standard_labelling(t.graph());
        let want = oracle.coefficient(b1, b2, l.edges());
        let have = got.get(&t).copied().unwrap_or(0);
        assert_eq!(have, want, "{b1:?} * {b2:?} at {t:?}");
    }
}

#[test]
fn table_matches_labelling_count_on_full_bases() {
    for (n, d) in [(1, 1), (2, 2), (2, 3), (3, 2), (2, 4)] {
        let table = StructureTable::get(n, d).unwrap();
        let oracle = LabellingOracle::new(&table);
        let symbols = table.symbols();
        for b1 in &symbols {
            for b2 in &symbols {
                check_pair(&table, &oracle, b1, b2);
            }
        }
    }
}

#[test]
fn table_matches_labelling_count_on_sampled_pairs_at_3_3() {
    let table = StructureTable::get(3, 3).unwrap();
    let oracle = LabellingOracle::new(&table);
    let symbols = table.symbols();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..400 {
        let b1 = symbols.choose(&mut rng).unwrap();
        let b2 = symbols.choose(&mut rng).unwrap();
        check_pair(&table, &oracle, b1, b2);
    }
}

#[test]
fn odd_odd_constants_do_not_depend_on_the_target_labelling() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, d) in [(2, 2), (3, 3)] {
        let table = StructureTable::get(n, d).unwrap();
        let oracle = LabellingOracle::new(&table);
        let odd: Vec<BasisSymbol> = table.symbols().into_iter().filter(|b| b.parity() == Parity::Odd).collect();
        for _ in 0..60 {
            let b1 = odd.choose(&mut rng).unwrap();
            let b2 = odd.choose(&mut rng).unwrap();
            let consts = table.constants(b1, b2).unwrap();
            for t in target_basis(n, d, Parity::Even) {
                let want = consts.get(&t).copied().unwrap_or(0);
                let mut l = standard_labelling(t.graph()).edges().to_vec();
                for _ in 0..5 {
                    l.shuffle(&mut rng);
                    assert_eq!(oracle.coefficient(b1, b2, &l), want, "{b1:?} * {b2:?} at {t:?}");
                }
            }
        }
    }
}

fn basis_elements(n: usize, d: usize) -> Vec<GradedElement<Rational>> {
    StructureTable::get(n, d)
        .unwrap()
        .symbols()
        .into_iter()
        .map(|b| GradedElement::basis(b).unwrap())
        .collect()
}

#[test]
fn associativity_on_all_triples_at_2_2() {
    let basis = basis_elements(2, 2);
    for a in &basis {
        for b in &basis {
            let ab = multiply(a, b).unwrap();
            for c in &basis {
                let left = multiply(&ab, c).unwrap();
                let right = multiply(a, &multiply(b, c).unwrap()).unwrap();
                assert_eq!(left, right, "({a})({b})({c})");
            }
        }
    }
}

#[test]
fn associativity_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for (n, d) in [(2, 3), (3, 3)] {
        let basis = basis_elements(n, d);
        for _ in 0..200 {
            let pick = |rng: &mut ChaCha8Rng| basis[rng.gen_range(0..basis.len())].clone();
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let left = multiply(&multiply(&a, &b).unwrap(), &c).unwrap();
            let right = multiply(&a, &multiply(&b, &c).unwrap()).unwrap();
            assert_eq!(left, right, "({a})({b})({c}) at ({n},{d})");
        }
    }
}

#[test]
fn products_respect_the_grading() {
    for (n, d) in [(2, 2), (2, 3)] {
        let basis = basis_elements(n, d);
        for a in &basis {
            for b in &basis {
                let p = multiply(a, b).unwrap();
                if p.is_zero() {
                    continue;
                }
                let want = a.homogeneous_parity().unwrap().combine(b.homogeneous_parity().unwrap());
                assert_eq!(p.homogeneous_parity(), Some(want), "{a} * {b}");
            }
        }
    }
}

#[test]
fn odd_products_vanish_on_non_transverse_pairs() {
    let budget = Budget::default();
    let basis = basis_elements(2, 2);
    let (n, d) = (2usize, 2usize);
    let dim = n.pow(d as u32);
    for a in &basis {
        for b in &basis {
            let p = multiply(a, b).unwrap();
            if p.homogeneous_parity() != Some(Parity::Odd) {
                continue;
            }
            let m = element_matrix(&p, &budget).unwrap();
            for si in 0..dim {
                for ti in 0..dim {
                    let s = alt_schur::graph::BallsConfig::from_index(n, d, si);
                    let t = alt_schur::graph::BallsConfig::from_index(n, d, ti);
                    let g = alt_schur::graph::pair_multigraph(&s, &t).unwrap();
                    if !g.is_simple() {
                        assert!(m.matrix().get(si, ti).is_zero(), "{a} * {b} at ({si},{ti})");
                    }
                }
            }
        }
    }
}

#[test]
fn matrix_of_involution_is_transpose() {
    let budget = Budget::default();
    for x in basis_elements(2, 2) {
        let m = element_matrix(&x, &budget).unwrap();
        let mi = element_matrix(&anti_involution(&x), &budget).unwrap();
        assert_eq!(mi.matrix(), &m.matrix().transpose(), "{x}");
    }
}

#[test]
fn constants_reduce_into_prime_fields() {
    let table = StructureTable::get(2, 3).unwrap();
    for b1 in table.symbols() {
        for b2 in table.symbols() {
            let q = multiply(
                &GradedElement::<Rational>::basis(b1.clone()).unwrap(),
                &GradedElement::basis(b2.clone()).unwrap(),
            )
            .unwrap();
            let p = multiply(
                &GradedElement::<Gf5>::basis(b1.clone()).unwrap(),
                &GradedElement::basis(b2.clone()).unwrap(),
            )
            .unwrap();
            for (t, c) in q.terms() {
                let as_int: i64 = c.to_integer().try_into().unwrap();
                assert_eq!(p.coeff(t), alt_schur::Scalar::from_i64(as_int));
            }
        }
    }
}
