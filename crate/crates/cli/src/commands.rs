use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use alt_schur::algebra::{
    anti_involution, delta_check, element_field, factorization_check, identity as one,
    GradedElement, ParityCase, StructureTable,
};
use alt_schur::enumerate::{enum_lambda, enum_m, enum_n, Budget};
use alt_schur::koszul::{koszul_report, KoszulReport};
use alt_schur::oracle::{element_matrix, verify_table};
use alt_schur::{Error, FieldSpec, Fp, Rational, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::Kind;

pub enum CliError {
    Lib(Error),
    Failed(String),
}

impl CliError {
    /// 2 validation failure, 3 budget refusal, 4 I/O or parse error.
    pub fn code(&self) -> u8 {
        match self {
            CliError::Lib(Error::BudgetExceeded { .. }) => 3,
            CliError::Lib(Error::Io(_) | Error::Json(_) | Error::Parse(_)) => 4,
            CliError::Lib(_) | CliError::Failed(_) => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Failed(s) => f.write_str(s),
        }
    }
}

type CliResult = Result<ExitCode, CliError>;

/// Runs `$body` with `$F` bound to the scalar type of `$spec`.
macro_rules! with_field {
    ($spec:expr, $F:ident => $body:expr) => {
        match $spec {
            FieldSpec::Rationals => {
                type $F = Rational;
                $body
            }
            FieldSpec::PrimeField(p) => with_field!(@prime p, $F => $body; 3 5 7 11 13 17 19 23 29 31 37 41 43 47),
        }
    };
    (@prime $p:expr, $F:ident => $body:expr; $($q:literal)*) => {
        match $p {
            $($q => {
                type $F = Fp<$q>;
                $body
            })*
            other => Err(CliError::Lib(Error::InvalidField(format!(
                "GF({other}) is not supported; use an odd prime below 50"
            )))),
        }
    };
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("JSON value serialises"));
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| {
        CliError::Lib(Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
    })
}

pub fn enumerate(n: usize, d: usize, kind: Kind, as_json: bool) -> CliResult {
    let items: Vec<Value> = match kind {
        Kind::M => enum_m(n, d).iter().map(|g| json!(g.rows())).collect(),
        Kind::N => enum_n(n, d).iter().map(|g| json!(g.rows())).collect(),
        Kind::Lambda => enum_lambda(n, d).iter().map(|l| json!(l)).collect(),
    };
    let (label, noun) = match kind {
        Kind::M => ("M", "graphs"),
        Kind::N => ("N", "graphs"),
        Kind::Lambda => ("Lambda", "compositions"),
    };
    if as_json {
        print_json(&json!({"n": n, "d": d, "kind": label, "count": items.len(), "items": items}));
    } else {
        println!("{} {noun} in {label}({n},{d})", items.len());
        for item in &items {
            println!("{}", serde_json::to_string(item).expect("JSON value serialises"));
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn identity(n: usize, d: usize, field: FieldSpec) -> CliResult {
    with_field!(field, F => {
        print_json(&one::<F>(n, d).to_json_value());
        Ok(ExitCode::SUCCESS)
    })
}

pub fn multiply(x: &Path, y: &Path) -> CliResult {
    let (sx, sy) = (read(x)?, read(y)?);
    let field = element_field(&sx)?;
    with_field!(field, F => {
        let a = GradedElement::<F>::from_json(&sx)?;
        let b = GradedElement::<F>::from_json(&sy)?;
        print_json(&a.multiply(&b)?.to_json_value());
        Ok(ExitCode::SUCCESS)
    })
}

pub fn matrix(x: &Path) -> CliResult {
    let s = read(x)?;
    let field = element_field(&s)?;
    with_field!(field, F => {
        let a = GradedElement::<F>::from_json(&s)?;
        print!("{}", element_matrix(&a, &Budget::from_env())?.to_csv());
        Ok(ExitCode::SUCCESS)
    })
}

pub fn table(n: usize, d: usize, field: FieldSpec, dir: &Path, as_json: bool) -> CliResult {
    Budget::from_env().check_basis(n, d)?;
    let (table, hit) = StructureTable::load_or_build(n, d, dir)?;
    let path = StructureTable::cache_path(dir, n, d);
    if hit {
        eprintln!("loaded {}", path.display());
    } else {
        eprintln!("wrote {}", path.display());
    }
    let nonzero: BTreeMap<&str, usize> = ParityCase::ALL
        .iter()
        .map(|&case| {
            let count = table
                .products(case)
                .flat_map(|(_, _, terms)| terms.iter())
                .filter(|(_, c)| match field {
                    FieldSpec::Rationals => *c != 0,
                    FieldSpec::PrimeField(p) => c.rem_euclid(p as i64) != 0,
                })
                .count();
            (case.key(), count)
        })
        .collect();
    if as_json {
        print_json(&json!({
            "n": n,
            "d": d,
            "field": field.to_string(),
            "even_dim": table.even_dim(),
            "odd_dim": table.odd_dim(),
            "nonzero": nonzero,
        }));
    } else {
        println!("AS({n},{d}) over {field}: |M| = {}, |N| = {}", table.even_dim(), table.odd_dim());
        println!("nonzero structure constants by parity case:");
        for (key, count) in &nonzero {
            println!("  {key}  {count:>8}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

enum Cell {
    Done(KoszulReport),
    Skipped(usize, usize, String),
}

pub fn sweep(n_max: usize, d_max: usize, field: FieldSpec, as_json: bool) -> CliResult {
    let grid: Vec<(usize, usize)> = (1..=n_max).flat_map(|n| (1..=d_max).map(move |d| (n, d))).collect();
    let budget = Budget::from_env();
    let cells: Vec<Result<Cell, CliError>> = grid
        .par_iter()
        .map(|&(n, d)| {
            if let Err(e) = budget.check_basis(n, d) {
                return Ok(Cell::Skipped(n, d, e.to_string()));
            }
            let report = with_field!(field, F => koszul_report::<F>(n, d).map_err(CliError::from))?;
            Ok(Cell::Done(report))
        })
        .collect();
    let cells = cells.into_iter().collect::<Result<Vec<_>, _>>()?;
    if as_json {
        let rendered: Vec<Value> = cells
            .iter()
            .map(|c| match c {
                Cell::Done(r) => serde_json::to_value(r).expect("report serialises"),
                Cell::Skipped(n, d, why) => json!({"n": n, "d": d, "skipped": why}),
            })
            .collect();
        print_json(&json!({"field": field.to_string(), "cells": rendered}));
        return Ok(ExitCode::SUCCESS);
    }
    println!("φ: S⁻ ⊗_S S⁻ → S and ψ: S → End(S⁻_S) over {field}");
    println!(
        "{:>3} {:>3} {:>6} {:>6} {:>8} {:>7} {:>5} {:>6} {:>6} {:>5}",
        "n", "d", "|M|", "|N|", "S⁻⊗S⁻", "rank φ", "φ iso", "ker ψ", "End", "ψ iso"
    );
    let mut witnesses = Vec::new();
    for cell in &cells {
        match cell {
            Cell::Done(r) => {
                println!(
                    "{:>3} {:>3} {:>6} {:>6} {:>8} {:>7} {:>5} {:>6} {:>6} {:>5}",
                    r.n,
                    r.d,
                    r.phi.even_dim,
                    r.phi.odd_dim,
                    r.phi.tensor_dim,
                    r.phi.phi_rank,
                    yes_no(r.phi.iso),
                    r.psi.kernel_dim,
                    r.psi.commutant_dim,
                    yes_no(r.psi.iso)
                );
                if !r.psi.kernel_witnesses.is_empty() {
                    // graphs with the most parallel edges first
                    let mut all = r.psi.kernel_witnesses.clone();
                    all.sort_by_key(|g| std::cmp::Reverse(g.flat().iter().copied().max().unwrap_or(0)));
                    let gs: Vec<String> = all.iter().take(3).map(|g| g.to_string()).collect();
                    let more = match all.len().saturating_sub(3) {
                        0 => String::new(),
                        k => format!(" and {k} more"),
                    };
                    witnesses.push(format!("  ({},{}): ξ of {}{more}", r.n, r.d, gs.join(", ")));
                }
            }
            Cell::Skipped(n, d, why) => println!("{n:>3} {d:>3}  skipped: {why}"),
        }
    }
    if !witnesses.is_empty() {
        println!("ψ kernel witnesses (ξ_Γ acting as zero on S⁻):");
        for w in &witnesses {
            println!("{w}");
        }
    }
    println!("ψ iso frontier (rows n, columns d; Y iso, . not iso, ? skipped):");
    print!("     ");
    for d in 1..=d_max {
        print!(" d={d:<2}");
    }
    println!();
    for n in 1..=n_max {
        print!("n={n:<3}");
        for d in 1..=d_max {
            let mark = cells
                .iter()
                .find_map(|c| match c {
                    Cell::Done(r) if (r.n, r.d) == (n, d) => Some(if r.psi.iso { "Y" } else { "." }),
                    Cell::Skipped(a, b, _) if (*a, *b) == (n, d) => Some("?"),
                    _ => None,
                })
                .unwrap_or("?");
            print!("  {mark:<3}");
        }
        println!();
    }
    Ok(ExitCode::SUCCESS)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

const CHECKS: [&str; 6] = ["oracle", "associativity", "involution", "identity", "factorization", "delta"];

pub fn verify(n: usize, d: usize, field: FieldSpec, as_json: bool) -> CliResult {
    let budget = Budget::from_env();
    budget.check_configs(n, d)?;
    budget.check_basis(n, d)?;
    let outcomes: Vec<Result<Outcome, CliError>> = CHECKS
        .par_iter()
        .map(|&name| with_field!(field, F => run_check::<F>(name, n, d, &budget)))
        .collect();
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;
    let passed = outcomes.iter().all(|o| o.passed);
    if as_json {
        let checks: Vec<Value> = outcomes
            .iter()
            .map(|o| json!({"name": o.name, "passed": o.passed, "detail": o.detail}))
            .collect();
        print_json(&json!({
            "n": n,
            "d": d,
            "field": field.to_string(),
            "passed": passed,
            "checks": checks,
        }));
    } else {
        println!("verify AS({n},{d}) over {field}");
        for o in &outcomes {
            println!("  {:<14} {:<4} {}", o.name, if o.passed { "pass" } else { "FAIL" }, o.detail);
        }
    }
    if passed {
        Ok(ExitCode::SUCCESS)
    } else {
        let first = outcomes.iter().find(|o| !o.passed).expect("a failing check");
        Err(CliError::Failed(format!("{} failed: {}", first.name, first.detail)))
    }
}

fn run_check<F: Scalar>(name: &'static str, n: usize, d: usize, budget: &Budget) -> Result<Outcome, CliError> {
    let table = StructureTable::get(n, d)?;
    let basis: Vec<GradedElement<F>> = table
        .symbols()
        .into_iter()
        .map(GradedElement::basis)
        .collect::<Result<_, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64((n * 1000 + d) as u64);
    let mut failure: Option<String> = None;
    let detail: String = match name {
        "oracle" => {
            let r = verify_table::<F>(n, d, budget)?;
            failure = r.first_mismatch.clone();
            if r.passed {
                format!("{} pairs", r.pairs)
            } else {
                failure.get_or_insert_with(|| "mismatch".into());
                String::new()
            }
        }
        "associativity" => {
            let triples: Vec<(usize, usize, usize)> = if basis.len() <= 20 {
                let k = basis.len();
                (0..k * k * k).map(|i| (i / (k * k), (i / k) % k, i % k)).collect()
            } else {
                let k = basis.len();
                (0..200).map(|_| (rng.gen_range(0..k), rng.gen_range(0..k), rng.gen_range(0..k))).collect()
            };
            for &(a, b, c) in &triples {
                let (x, y, z) = (&basis[a], &basis[b], &basis[c]);
                let left = x.multiply(y)?.multiply(z)?;
                let right = x.multiply(&y.multiply(z)?)?;
                if left != right {
                    failure = Some(format!("({x})({y})({z})"));
                    break;
                }
            }
            format!("{} triples", triples.len())
        }
        "involution" => {
            let k = basis.len();
            let pairs: Vec<(usize, usize)> = if k <= 40 {
                (0..k * k).map(|i| (i / k, i % k)).collect()
            } else {
                (0..200).map(|_| (rng.gen_range(0..k), rng.gen_range(0..k))).collect()
            };
            for x in &basis {
                if anti_involution(&anti_involution(x)) != *x {
                    failure = Some(format!("ι² ≠ id on {x}"));
                }
            }
            for &(a, b) in &pairs {
                let (x, y) = (&basis[a], &basis[b]);
                if anti_involution(&x.multiply(y)?) != anti_involution(y).multiply(&anti_involution(x))? {
                    failure.get_or_insert_with(|| format!("ι({x}·{y}) ≠ ι({y})ι({x})"));
                }
            }
            format!("{} pairs", pairs.len())
        }
        "identity" => {
            let unit = one::<F>(n, d);
            for x in &basis {
                if unit.multiply(x)? != *x || x.multiply(&unit)? != *x {
                    failure = Some(format!("1·{x} or {x}·1 differs from {x}"));
                    break;
                }
            }
            format!("{} basis elements", basis.len())
        }
        "factorization" | "delta" if n < d => "skipped: requires n >= d".into(),
        "factorization" => {
            let graphs = enum_n(n, d);
            for g in &graphs {
                let r = factorization_check(g)?;
                if !r.passed {
                    failure = Some(format!("{}: {}", r.subject, r.detail.unwrap_or_default()));
                    break;
                }
            }
            format!("{} graphs", graphs.len())
        }
        "delta" => {
            let graphs = enum_m(n, d);
            for g in &graphs {
                let r = delta_check(g)?;
                if !r.passed {
                    failure = Some(format!("{}: {}", r.subject, r.detail.unwrap_or_default()));
                    break;
                }
            }
            format!("{} graphs", graphs.len())
        }
        other => unreachable!("unknown check {other}"),
    };
    Ok(match failure {
        Some(f) => Outcome { name, passed: false, detail: f },
        None => Outcome { name, passed: true, detail },
    })
}
