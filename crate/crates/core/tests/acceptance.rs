//! Acceptance suite: one PASS/FAIL line per criterion. Runs as a plain
//! binary (`harness = false`) and exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use alt_schur::algebra::{
    anti_involution, delta_check, factorization_check, multiply, rect_compose, structure_constants,
    BasisSymbol, GradedElement, StructureTable,
};
use alt_schur::enumerate::{binomial, enum_lambda, enum_m, enum_n, wedge_dimension_sum, Budget};
use alt_schur::graph::{complete_bipartite, gamma0_lambda, gamma_lambda, gamma_perm, Multigraph};
use alt_schur::koszul::{
    as_module_to_pair, eta_map, phi_analysis, psi_analysis, psi_kernel, pair_to_as_module,
    ASModule, SModule,
};
use alt_schur::oracle::verify_table;
use alt_schur::{Gf5, Rational, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LIMIT_WORKED_PRODUCT: Duration = Duration::from_secs(1);
const LIMIT_LATIN_3: Duration = Duration::from_secs(30);
const LIMIT_ZETAZETA: Duration = Duration::from_secs(5);
const LIMIT_ORACLE: Duration = Duration::from_secs(300);
const LIMIT_PHI_33: Duration = Duration::from_secs(600);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(label: &str, start: Instant, limit: Duration) -> Result<String, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("{label} took {took:?}, limit {limit:?}"))?;
    Ok(format!("{label} in {took:.2?}"))
}

fn xi(rows: &[Vec<u32>]) -> GradedElement<Rational> {
    GradedElement::xi(Multigraph::from_rows(rows).unwrap()).unwrap()
}

/// Order-`n` Latin squares by row-by-row backtracking.
fn count_latin_squares(n: usize) -> u64 {
    fn go(n: usize, cell: usize, grid: &mut Vec<usize>) -> u64 {
        if cell == n * n {
            return 1;
        }
        let (r, c) = (cell / n, cell % n);
        let mut total = 0;
        for v in 0..n {
            let clash = (0..c).any(|j| grid[r * n + j] == v) || (0..r).any(|i| grid[i * n + c] == v);
            if !clash {
                grid[cell] = v;
                total += go(n, cell + 1, grid);
            }
        }
        total
    }
    go(n, 0, &mut vec![0; n * n])
}

fn worked_product() -> Outcome {
    let start = Instant::now();
    let p = multiply(&xi(&[vec![2, 0], vec![1, 1]]), &xi(&[vec![2, 1], vec![0, 1]])).map_err(|e| e.to_string())?;
    let want = xi(&[vec![3, 0], vec![0, 1]])
        .scale(&Rational::from_i64(3))
        .add(&xi(&[vec![2, 1], vec![1, 0]]))
        .unwrap();
    ensure(p == want, || format!("got {p}"))?;
    within("3ξ + ξ", start, LIMIT_WORKED_PRODUCT)
}

fn latin_squares() -> Outcome {
    let mut notes = Vec::new();
    for n in 1..=3 {
        let start = Instant::now();
        let f = BasisSymbol::Even(complete_bipartite(n).into_multigraph());
        let consts = structure_constants(&f, &f).map_err(|e| e.to_string())?;
        let coeff = consts.get(&f).copied().unwrap_or(0);
        let latin = count_latin_squares(n) as i64;
        ensure(coeff == latin, || format!("n={n}: coefficient {coeff}, Latin squares {latin}"))?;
        if n == 3 {
            notes.push(within("n=3", start, LIMIT_LATIN_3)?);
        }
        notes.push(format!("n={n}: {coeff}"));
    }
    Ok(notes.join(", "))
}

fn zetazeta() -> Outcome {
    let start = Instant::now();
    for lambda in enum_lambda(3, 3) {
        let g = gamma_lambda(&lambda, 3).unwrap();
        let z = GradedElement::<Rational>::zeta(g.clone()).unwrap();
        let zs = GradedElement::<Rational>::zeta(g.star()).unwrap();
        let p = multiply(&z, &zs).map_err(|e| e.to_string())?;
        let fact: i64 = lambda.iter().map(|&l| (1..=l as i64).product::<i64>()).product();
        let want = GradedElement::xi(gamma0_lambda(&lambda, 3).unwrap())
            .unwrap()
            .scale(&Rational::from_i64(fact));
        ensure(p == want, || format!("λ={lambda:?}: got {p}"))?;
    }
    within("10 compositions", start, LIMIT_ZETAZETA)
}

fn permutations() -> Outcome {
    let perms: Vec<Vec<usize>> = {
        let mut out = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    if a != b && b != c && a != c {
                        out.push(vec![a, b, c]);
                    }
                }
            }
        }
        out
    };
    let mut checked = 0;
    for w1 in &perms {
        for w2 in &perms {
            let w12: Vec<usize> = (0..3).map(|i| w1[w2[i]]).collect();
            let x1 = GradedElement::<Rational>::xi(gamma_perm(w1, 3).unwrap().into_multigraph()).unwrap();
            let x2 = GradedElement::<Rational>::xi(gamma_perm(w2, 3).unwrap().into_multigraph()).unwrap();
            let want = GradedElement::<Rational>::xi(gamma_perm(&w12, 3).unwrap().into_multigraph()).unwrap();
            let p = multiply(&x1, &x2).map_err(|e| e.to_string())?;
            ensure(p == want, || format!("w1={w1:?}, w2={w2:?}: got {p}"))?;
            checked += 1;
        }
    }
    ensure(checked == 36, || format!("{checked} pairs"))?;
    Ok("36 pairs".into())
}

fn oracle() -> Outcome {
    let start = Instant::now();
    let budget = Budget::default();
    let mut pairs = 0;
    for (n, d) in [(2, 2), (2, 3), (2, 4), (3, 3)] {
        let q = verify_table::<Rational>(n, d, &budget).map_err(|e| e.to_string())?;
        ensure(q.passed, || format!("({n},{d}) over Q: {:?}", q.first_mismatch))?;
        let p = verify_table::<Gf5>(n, d, &budget).map_err(|e| e.to_string())?;
        ensure(p.passed, || format!("({n},{d}) over GF(5): {:?}", p.first_mismatch))?;
        pairs += q.pairs + p.pairs;
    }
    within(&format!("{pairs} pairs"), start, LIMIT_ORACLE)
}

fn involution() -> Outcome {
    let table = StructureTable::get(2, 2).map_err(|e| e.to_string())?;
    let basis: Vec<GradedElement<Rational>> = table
        .symbols()
        .into_iter()
        .map(|b| GradedElement::basis(b).unwrap())
        .collect();
    ensure(basis.len() == 16, || format!("{} basis elements", basis.len()))?;
    let check = |x: &GradedElement<Rational>, y: &GradedElement<Rational>| -> Result<(), String> {
        let lhs = anti_involution(&multiply(x, y).map_err(|e| e.to_string())?);
        let rhs = multiply(&anti_involution(y), &anti_involution(x)).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("ι({x}·{y}) = {lhs}, ι(y)ι(x) = {rhs}"))?;
        ensure(anti_involution(&anti_involution(x)) == *x, || format!("ι² ≠ id on {x}"))
    };
    for x in &basis {
        for y in &basis {
            check(x, y)?;
        }
    }
    let table = StructureTable::get(3, 3).map_err(|e| e.to_string())?;
    let symbols = table.symbols();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let x = GradedElement::basis(symbols[rng.gen_range(0..symbols.len())].clone()).unwrap();
        let y = GradedElement::basis(symbols[rng.gen_range(0..symbols.len())].clone()).unwrap();
        check(&x, &y)?;
    }
    Ok("256 pairs at (2,2), 100 at (3,3)".into())
}

fn factorizations() -> Outcome {
    let mut count = 0;
    for n in [2, 3] {
        for g in enum_n(n, n) {
            let r = factorization_check(&g).map_err(|e| e.to_string())?;
            ensure(r.passed, || format!("{}: {:?}", r.subject, r.detail))?;
            count += 1;
        }
        for g in enum_m(n, n) {
            let r = delta_check(&g).map_err(|e| e.to_string())?;
            ensure(r.passed, || format!("{}: {:?}", r.subject, r.detail))?;
            count += 1;
        }
    }
    Ok(format!("{count} graphs"))
}

fn phi_dichotomy() -> Outcome {
    let mut notes = Vec::new();
    for (n, d) in [(2, 2), (3, 3)] {
        let start = Instant::now();
        let q = phi_analysis::<Rational>(n, d).map_err(|e| e.to_string())?;
        ensure(q.iso, || format!("({n},{d}) over Q: {q:?}"))?;
        let p = phi_analysis::<Gf5>(n, d).map_err(|e| e.to_string())?;
        ensure(p.iso, || format!("({n},{d}) over GF(5): {p:?}"))?;
        if (n, d) == (3, 3) {
            notes.push(within("(3,3)", start, LIMIT_PHI_33)?);
        }
    }
    for (n, d) in [(1, 2), (2, 4)] {
        let q = phi_analysis::<Rational>(n, d).map_err(|e| e.to_string())?;
        ensure(!q.iso, || format!("({n},{d}) reported iso: {q:?}"))?;
    }
    notes.push("iso at (2,2),(3,3); not at (1,2),(2,4)".into());
    Ok(notes.join(", "))
}

fn psi_dichotomy() -> Outcome {
    let mut grid = Vec::new();
    for n in 1..=3 {
        for d in 1..=3 {
            grid.push((n, d));
        }
    }
    grid.push((2, 4));
    for &(n, d) in &grid {
        let r = psi_analysis::<Rational>(n, d).map_err(|e| e.to_string())?;
        ensure(r.iso == (n >= d), || format!("({n},{d}): {r:?}"))?;
    }
    let parallel = Multigraph::from_rows(&[vec![3, 0], vec![0, 0]]).unwrap();
    let r = psi_analysis::<Rational>(2, 3).map_err(|e| e.to_string())?;
    ensure(r.kernel_witnesses.contains(&parallel), || "ξ of the 3-parallel-edge graph is not a kernel witness at (2,3)".into())?;
    let x = GradedElement::<Rational>::xi(parallel).unwrap();
    for g in enum_n(2, 3) {
        let p = multiply(&x, &GradedElement::zeta(g.clone()).unwrap()).map_err(|e| e.to_string())?;
        ensure(p.is_zero(), || format!("ξ·ζ{} = {p}", g.as_multigraph()))?;
    }
    let kernel = psi_kernel::<Rational>(2, 3).map_err(|e| e.to_string())?;
    ensure(kernel.len() == r.kernel_dim, || "kernel basis size differs from kernel_dim".into())?;
    Ok(format!("{} grid points", grid.len()))
}

fn correspondence() -> Outcome {
    let regular = ASModule::<Rational>::regular(2, 2).map_err(|e| e.to_string())?;
    let pair = as_module_to_pair(&regular).map_err(|e| e.to_string())?;
    let back = pair_to_as_module(&pair).map_err(|e| format!("θ rejected: {e}"))?;
    let (a, b) = (regular.all_actions(), back.all_actions());
    ensure(a.len() == 16 && a == b, || "action matrices differ after the roundtrip".into())?;
    Ok("16 action matrices reproduced".into())
}

fn eta_criterion() -> Outcome {
    let s22 = SModule::<Rational>::regular(2, 2).map_err(|e| e.to_string())?;
    let e22 = eta_map(&s22).map_err(|e| e.to_string())?;
    ensure(e22.iso, || "η not iso at (2,2)".into())?;
    let s24 = SModule::<Rational>::regular(2, 4).map_err(|e| e.to_string())?;
    let e24 = eta_map(&s24).map_err(|e| e.to_string())?;
    ensure(!e24.iso, || "η iso at (2,4)".into())?;
    Ok("iso at (2,2), not at (2,4)".into())
}

fn wedge_identity() -> Outcome {
    for n in 1..=4usize {
        for d in 0..=4usize {
            let lhs = wedge_dimension_sum(n, d);
            let rhs = binomial((n * n) as u128, d as u128);
            ensure(lhs == rhs, || format!("n={n}, d={d}: {lhs} vs {rhs}"))?;
        }
    }
    Ok("n,d ≤ 4".into())
}

fn rectangular() -> Outcome {
    let basis = enum_m(2, 2);
    for a in &basis {
        for b in &basis {
            let rect = rect_compose(a, b).map_err(|e| e.to_string())?;
            let square: BTreeMap<Multigraph, i64> =
                structure_constants(&BasisSymbol::Even(a.clone()), &BasisSymbol::Even(b.clone()))
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .map(|(s, c)| (s.graph().clone(), c))
                    .collect();
            ensure(rect == square, || format!("{a} ∘ {b}: {rect:?} vs {square:?}"))?;
        }
    }
    Ok(format!("{} pairs", basis.len() * basis.len()))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("worked product", worked_product),
        ("Latin-square coefficients", latin_squares),
        ("zeta zeta-star", zetazeta),
        ("permutation homomorphism", permutations),
        ("oracle equivalence", oracle),
        ("anti-involution", involution),
        ("factorization lemmas", factorizations),
        ("phi dichotomy", phi_dichotomy),
        ("psi dichotomy", psi_dichotomy),
        ("module correspondence", correspondence),
        ("eta criterion", eta_criterion),
        ("dimension identity", wedge_identity),
        ("rectangular composition", rectangular),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let k = i + 1;
        if only.is_some_and(|o| o != k) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        match outcome {
            Ok(note) => println!("criterion {k:>2} PASS  {name}: {note} [{took:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("criterion {k:>2} FAIL  {name}: {why} [{took:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
