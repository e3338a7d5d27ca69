mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use alt_schur::FieldSpec;
use clap::{Parser, Subcommand, ValueEnum};

/// Exact computation in alternating Schur algebras.
#[derive(Parser)]
#[command(name = "alt-schur", version)]
struct Cli {
    /// Machine-readable JSON on stdout instead of aligned text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    #[value(name = "M")]
    M,
    #[value(name = "N")]
    N,
    #[value(name = "Lambda")]
    Lambda,
}

#[derive(Subcommand)]
enum Command {
    /// List M(n,d), N(n,d) or Λ(n,d) in canonical order.
    Enumerate {
        n: usize,
        d: usize,
        #[arg(long, value_enum, default_value = "M")]
        kind: Kind,
    },
    /// Print the identity element of AS(n,d) as JSON.
    Identity {
        n: usize,
        d: usize,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
    },
    /// Multiply two elements read from JSON files.
    Multiply { x: PathBuf, y: PathBuf },
    /// Build or load the structure-constant table and summarise it.
    Table {
        n: usize,
        d: usize,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        /// Cache directory for table files.
        #[arg(long, env = "ALT_SCHUR_CACHE_DIR", default_value = ".alt-schur-cache")]
        out: PathBuf,
    },
    /// φ and ψ diagnostics over the grid 1 ≤ n ≤ n-max, 1 ≤ d ≤ d-max.
    Sweep {
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 3)]
        d_max: usize,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
    },
    /// Check the table against the operator oracle and the algebra identities.
    Verify {
        n: usize,
        d: usize,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
    },
    /// Print the operator matrix of an element on F[B(n,d)] as CSV.
    Matrix { x: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enumerate { n, d, kind } => commands::enumerate(n, d, kind, cli.json),
        Command::Identity { n, d, field } => commands::identity(n, d, field),
        Command::Multiply { x, y } => commands::multiply(&x, &y),
        Command::Table { n, d, field, out } => commands::table(n, d, field, &out, cli.json),
        Command::Sweep { n_max, d_max, field } => commands::sweep(n_max, d_max, field, cli.json),
        Command::Verify { n, d, field } => commands::verify(n, d, field, cli.json),
        Command::Matrix { x } => commands::matrix(&x),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
