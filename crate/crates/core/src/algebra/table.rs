//! Full multiplication tables over ℤ, memoised per `(n,d)` and cacheable on disk.
//!
//! The table is built target by target: for the representative pair `(S,U)`
//! of each basis graph `Γ`, every `T ∈ B(n,d)` contributes one unit to the
//! product `Γ_{S,T} · Γ_{T,U}` (signed in the odd cases). This costs
//! `(|M|+|N|)·n^d` and does not share code with [`super::structure_constants`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{standard_index, BasisSymbol, Parity};
use crate::enumerate::{enum_m, enum_n, representative_pair, BallsIter, Budget};
use crate::error::{Error, Result};
use crate::graph::{permutation_sign, Multigraph, SimpleGraph};

/// Parities of the two factors of a product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ParityCase {
    EvenEven,
    EvenOdd,
    OddEven,
    OddOdd,
}

impl ParityCase {
    pub const ALL: [ParityCase; 4] = [
        ParityCase::EvenEven,
        ParityCase::EvenOdd,
        ParityCase::OddEven,
        ParityCase::OddOdd,
    ];

    pub fn of(left: Parity, right: Parity) -> Self {
        match (left, right) {
            (Parity::Even, Parity::Even) => ParityCase::EvenEven,
            (Parity::Even, Parity::Odd) => ParityCase::EvenOdd,
            (Parity::Odd, Parity::Even) => ParityCase::OddEven,
            (Parity::Odd, Parity::Odd) => ParityCase::OddOdd,
        }
    }

    pub fn factors(self) -> (Parity, Parity) {
        match self {
            ParityCase::EvenEven => (Parity::Even, Parity::Even),
            ParityCase::EvenOdd => (Parity::Even, Parity::Odd),
            ParityCase::OddEven => (Parity::Odd, Parity::Even),
            ParityCase::OddOdd => (Parity::Odd, Parity::Odd),
        }
    }

    pub fn target(self) -> Parity {
        let (a, b) = self.factors();
        a.combine(b)
    }

    fn slot(self) -> usize {
        self as usize
    }

    pub fn key(self) -> &'static str {
        match self {
            ParityCase::EvenEven => "ee",
            ParityCase::EvenOdd => "eo",
            ParityCase::OddEven => "oe",
            ParityCase::OddOdd => "oo",
        }
    }
}

type Products = HashMap<(u32, u32), Vec<(u32, i64)>>;

/// Structure constants of `AS(n,d)` indexed by position in the canonical bases.
#[derive(Clone, PartialEq)]
pub struct StructureTable {
    n: usize,
    d: usize,
    even: Vec<Multigraph>,
    odd: Vec<SimpleGraph>,
    even_index: HashMap<Multigraph, usize>,
    odd_index: HashMap<Multigraph, usize>,
    cases: [Products; 4],
}

/// Counts of nonzero structure constants per parity case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSummary {
    pub n: usize,
    pub d: usize,
    pub even_dim: usize,
    pub odd_dim: usize,
    pub nonzero: BTreeMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    n: usize,
    d: usize,
    even_dim: usize,
    odd_dim: usize,
    ee: Vec<[i64; 4]>,
    eo: Vec<[i64; 4]>,
    oe: Vec<[i64; 4]>,
    oo: Vec<[i64; 4]>,
}

type Memo = Mutex<HashMap<(usize, usize), Arc<StructureTable>>>;

/// One nonzero constant: case, left index, right index, target index, value.
type Contribution = (ParityCase, u32, u32, u32, i64);

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

impl StructureTable {
    fn empty(n: usize, d: usize) -> Self {
        let even = enum_m(n, d);
        let odd = enum_n(n, d);
        let even_index = even.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        let odd_index = odd
            .iter()
            .enumerate()
            .map(|(i, g)| (g.as_multigraph().clone(), i))
            .collect();
        StructureTable {
            n,
            d,
            even,
            odd,
            even_index,
            odd_index,
            cases: Default::default(),
        }
    }

    /// Builds the table, refusing when `n^d` or `|M|+|N|` exceed `budget`.
    pub fn build_with_budget(n: usize, d: usize, budget: &Budget) -> Result<Self> {
        budget.check_basis(n, d)?;
        budget.check_configs(n, d)?;
        let mut table = StructureTable::empty(n, d);
        let targets: Vec<(Parity, usize)> = (0..table.even.len())
            .map(|i| (Parity::Even, i))
            .chain((0..table.odd.len()).map(|i| (Parity::Odd, i)))
            .collect();
        let parts: Vec<Vec<Contribution>> = targets
            .par_iter()
            .map(|&(p, t)| table.contributions(p, t))
            .collect();
        for part in parts {
            for (case, a, b, t, c) in part {
                table.cases[case.slot()].entry((a, b)).or_default().push((t, c));
            }
        }
        for products in &mut table.cases {
            for v in products.values_mut() {
                v.sort_unstable();
            }
        }
        Ok(table)
    }

    pub fn build(n: usize, d: usize) -> Result<Self> {
        StructureTable::build_with_budget(n, d, &Budget::from_env())
    }

    /// Memoised table for `(n,d)`.
    pub fn get(n: usize, d: usize) -> Result<Arc<Self>> {
        if let Some(t) = memo().lock().expect("table memo poisoned").get(&(n, d)) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(StructureTable::build(n, d)?);
        let mut guard = memo().lock().expect("table memo poisoned");
        Ok(Arc::clone(guard.entry((n, d)).or_insert(table)))
    }

    /// Loads `table_n{n}_d{d}.json` from `dir` if present, otherwise builds
    /// the table and writes it. The flag reports whether the cache was hit.
    pub fn load_or_build(n: usize, d: usize, dir: &Path) -> Result<(Arc<Self>, bool)> {
        let path = StructureTable::cache_path(dir, n, d);
        if path.exists() {
            let table = Arc::new(StructureTable::read_cache(&path)?);
            memo()
                .lock()
                .expect("table memo poisoned")
                .entry((n, d))
                .or_insert_with(|| Arc::clone(&table));
            return Ok((table, true));
        }
        let table = StructureTable::get(n, d)?;
        fs::create_dir_all(dir)?;
        table.write_cache(&path)?;
        Ok((table, false))
    }

    pub fn cache_path(dir: &Path, n: usize, d: usize) -> PathBuf {
        dir.join(format!("table_n{n}_d{d}.json"))
    }

    fn contributions(&self, parity: Parity, t: usize) -> Vec<Contribution> {
        let n = self.n;
        let target = match parity {
            Parity::Even => &self.even[t],
            Parity::Odd => self.odd[t].as_multigraph(),
        };
        let (s, u) = representative_pair(target);
        let (s, u) = (s.as_slice(), u.as_slice());
        let mut acc: HashMap<(ParityCase, u32, u32), i64> = HashMap::new();
        let mut adj1 = vec![0u32; n * n];
        let mut adj2 = vec![0u32; n * n];
        for config in BallsIter::new(n, self.d) {
            let tt = config.as_slice();
            adj1.iter_mut().for_each(|x| *x = 0);
            adj2.iter_mut().for_each(|x| *x = 0);
            for k in 0..self.d {
                adj1[tt[k] * n + s[k]] += 1;
                adj2[u[k] * n + tt[k]] += 1;
            }
            let g1 = Multigraph::from_flat(n, n, adj1.clone()).expect("square grid");
            let g2 = Multigraph::from_flat(n, n, adj2.clone()).expect("square grid");
            let sign = |g: &Multigraph, pos: &dyn Fn(usize) -> usize| {
                let idx = standard_index(g);
                let p: Vec<usize> = (0..self.d).map(|k| idx[pos(k)]).collect();
                permutation_sign(&p)
            };
            let odd1 = g1.is_simple().then(|| sign(&g1, &|k| tt[k] * n + s[k]));
            let odd2 = g2.is_simple().then(|| sign(&g2, &|k| u[k] * n + tt[k]));
            let e1 = self.even_index[&g1] as u32;
            let e2 = self.even_index[&g2] as u32;
            let mut add = |case, a: usize, b: usize, c: i64| {
                *acc.entry((case, a as u32, b as u32)).or_insert(0) += c;
            };
            match parity {
                Parity::Even => {
                    add(ParityCase::EvenEven, e1 as usize, e2 as usize, 1);
                    if let (Some(w1), Some(w2)) = (odd1, odd2) {
                        add(ParityCase::OddOdd, self.odd_index[&g1], self.odd_index[&g2], w1 * w2);
                    }
                }
                Parity::Odd => {
                    if let Some(w2) = odd2 {
                        add(ParityCase::EvenOdd, e1 as usize, self.odd_index[&g2], w2);
                    }
                    if let Some(w1) = odd1 {
                        add(ParityCase::OddEven, self.odd_index[&g1], e2 as usize, w1);
                    }
                }
            }
        }
        acc.into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|((case, a, b), c)| (case, a, b, t as u32, c))
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn even_basis(&self) -> &[Multigraph] {
        &self.even
    }

    pub fn odd_basis(&self) -> &[SimpleGraph] {
        &self.odd
    }

    pub fn even_dim(&self) -> usize {
        self.even.len()
    }

    pub fn odd_dim(&self) -> usize {
        self.odd.len()
    }

    /// `|M| + |N|`.
    pub fn dim(&self) -> usize {
        self.even.len() + self.odd.len()
    }

    pub fn even_index(&self, g: &Multigraph) -> Option<usize> {
        self.even_index.get(g).copied()
    }

    pub fn odd_index(&self, g: &Multigraph) -> Option<usize> {
        self.odd_index.get(g).copied()
    }

    /// All basis symbols: even ones first, each block in canonical order.
    pub fn symbols(&self) -> Vec<BasisSymbol> {
        self.even
            .iter()
            .cloned()
            .map(BasisSymbol::Even)
            .chain(self.odd.iter().cloned().map(BasisSymbol::Odd))
            .collect()
    }

    /// Position of `b` in [`Self::symbols`].
    pub fn index_of(&self, b: &BasisSymbol) -> Option<usize> {
        match b {
            BasisSymbol::Even(g) => self.even_index(g),
            BasisSymbol::Odd(g) => self.odd_index(g).map(|i| i + self.even.len()),
        }
    }

    pub fn symbol(&self, parity: Parity, idx: usize) -> BasisSymbol {
        match parity {
            Parity::Even => BasisSymbol::Even(self.even[idx].clone()),
            Parity::Odd => BasisSymbol::Odd(self.odd[idx].clone()),
        }
    }

    /// Nonzero `(target index, constant)` pairs of the product of basis
    /// elements `a` and `b` (indices within their parity blocks).
    pub fn product(&self, case: ParityCase, a: usize, b: usize) -> &[(u32, i64)] {
        self.cases[case.slot()]
            .get(&(a as u32, b as u32))
            .map_or(&[], Vec::as_slice)
    }

    /// Iterates over all stored products of one case as `(a, b, constants)`.
    pub fn products(&self, case: ParityCase) -> impl Iterator<Item = (usize, usize, &[(u32, i64)])> {
        self.cases[case.slot()]
            .iter()
            .map(|(&(a, b), v)| (a as usize, b as usize, v.as_slice()))
    }

    fn block_index(&self, b: &BasisSymbol) -> Result<usize> {
        b.check_shape(self.n, self.d)?;
        match b {
            BasisSymbol::Even(g) => self.even_index(g),
            BasisSymbol::Odd(g) => self.odd_index(g),
        }
        .ok_or_else(|| Error::shape(format!("{b:?} is not in the basis")))
    }

    /// Structure constants of `b1 · b2` read from the table.
    pub fn constants(&self, b1: &BasisSymbol, b2: &BasisSymbol) -> Result<BTreeMap<BasisSymbol, i64>> {
        let (a, b) = (self.block_index(b1)?, self.block_index(b2)?);
        let case = ParityCase::of(b1.parity(), b2.parity());
        Ok(self
            .product(case, a, b)
            .iter()
            .map(|&(t, c)| (self.symbol(case.target(), t as usize), c))
            .collect())
    }

    pub fn summary(&self) -> TableSummary {
        let nonzero = ParityCase::ALL
            .iter()
            .map(|&case| {
                let count = self.cases[case.slot()].values().map(Vec::len).sum();
                (case.key().to_string(), count)
            })
            .collect();
        TableSummary {
            n: self.n,
            d: self.d,
            even_dim: self.even.len(),
            odd_dim: self.odd.len(),
            nonzero,
        }
    }

    fn sorted_entries(&self, case: ParityCase) -> Vec<[i64; 4]> {
        let mut out: Vec<[i64; 4]> = self
            .products(case)
            .flat_map(|(a, b, v)| v.iter().map(move |&(t, c)| [a as i64, b as i64, t as i64, c]))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let file = TableFile {
            n: self.n,
            d: self.d,
            even_dim: self.even.len(),
            odd_dim: self.odd.len(),
            ee: self.sorted_entries(ParityCase::EvenEven),
            eo: self.sorted_entries(ParityCase::EvenOdd),
            oe: self.sorted_entries(ParityCase::OddEven),
            oo: self.sorted_entries(ParityCase::OddOdd),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: TableFile = serde_json::from_str(s)?;
        let mut table = StructureTable::empty(file.n, file.d);
        if table.even.len() != file.even_dim || table.odd.len() != file.odd_dim {
            return Err(Error::Parse(format!(
                "table dimensions {}+{} do not match ({},{})",
                file.even_dim, file.odd_dim, file.n, file.d
            )));
        }
        let blocks = [
            (ParityCase::EvenEven, &file.ee),
            (ParityCase::EvenOdd, &file.eo),
            (ParityCase::OddEven, &file.oe),
            (ParityCase::OddOdd, &file.oo),
        ];
        for (case, entries) in blocks {
            let (pa, pb) = case.factors();
            let bound = |p: Parity| match p {
                Parity::Even => table.even.len() as i64,
                Parity::Odd => table.odd.len() as i64,
            };
            let (la, lb, lt) = (bound(pa), bound(pb), bound(case.target()));
            let mut products = Products::new();
            for &[a, b, t, c] in entries {
                if !(0..la).contains(&a) || !(0..lb).contains(&b) || !(0..lt).contains(&t) || c == 0 {
                    return Err(Error::Parse(format!(
                        "bad {} entry [{a},{b},{t},{c}]",
                        case.key()
                    )));
                }
                products
                    .entry((a as u32, b as u32))
                    .or_default()
                    .push((t as u32, c));
            }
            for v in products.values_mut() {
                v.sort_unstable();
            }
            table.cases[case.slot()] = products;
        }
        Ok(table)
    }

    pub fn write_cache(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read_cache(path: &Path) -> Result<Self> {
        StructureTable::from_json(&fs::read_to_string(path)?)
    }
}

impl fmt::Debug for StructureTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StructureTable({:?})", self.summary())
    }
}
