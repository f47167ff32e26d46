//! `slickcw`: eigenvalue location for graphs given as slick clique-width
//! expressions.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 invariant violation,
//! 3 engine/oracle mismatch.

mod commands;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "slickcw",
    version,
    about = "Count graph eigenvalues through slick clique-width expressions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print diagonal entries congruent to M - cI and their inertia.
    Diag(DiagArgs),
    /// Count eigenvalues in an interval.
    Count(CountArgs),
    /// Translate between classic and slick expressions.
    Translate(InputArgs),
    /// Compare the engine against the dense oracle, or validate a box dump.
    Check(CheckArgs),
    /// Generate an expression.
    Gen(GenArgs),
    /// Time the engine and count arithmetic operations.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Slick,
    Classic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpecName {
    Adjacency,
    Laplacian,
    SignlessLaplacian,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Random S, L and R at every join.
    Slick,
    /// Random cograph (width 1).
    Cograph,
    /// Two random cographs joined by S = {(2,2)}.
    Construction,
    /// n disjoint copies of P4.
    P4,
    /// 2n disjoint copies of K2.
    K2,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Expression file.
    #[arg(long)]
    input: PathBuf,
    /// Input format; inferred from a `.classic` extension otherwise slick.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct SpecArgs {
    #[arg(long, value_enum, default_value_t = SpecName::Adjacency)]
    spec: SpecName,
    /// Common off-diagonal value for `--spec custom`.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    w: String,
    /// Diagonal file for `--spec custom`, lines `vertex value`.
    #[arg(long)]
    diagonal: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DiagArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    spec: SpecArgs,
    /// Shift c.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    c: String,
    /// Print one line per parse-tree node.
    #[arg(long)]
    trace: bool,
    /// Write every transmitted box to this file.
    #[arg(long)]
    dump_boxes: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    spec: SpecArgs,
    /// Interval such as `(0,1]`, `[-1/2,2)` or `(-inf,inf)`.
    #[arg(long, allow_hyphen_values = true)]
    interval: String,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Expression to compare against the oracle.
    #[arg(long, conflicts_with_all = ["fuzz", "boxes"])]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    c: String,
    /// Number of random expressions to compare, each at seven shifts.
    #[arg(long, conflicts_with = "boxes")]
    fuzz: Option<u64>,
    #[arg(long, default_value_t = 12)]
    max_n: usize,
    #[arg(long, default_value_t = 4)]
    max_k: usize,
    /// First fuzz seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest graph handed to the dense oracle.
    #[arg(long, default_value_t = 2000)]
    oracle_limit: usize,
    /// Box dump to validate (as written by `diag --dump-boxes`).
    #[arg(long)]
    boxes: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, default_value_t = 12)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Family::Slick)]
    family: Family,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Comma-separated atom counts.
    #[arg(long, value_delimiter = ',', default_values_t = [10_000usize, 20_000])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    c: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut out = String::new();
    let result = match cli.command {
        Command::Diag(a) => commands::diag(a, &mut out),
        Command::Count(a) => commands::count(a, &mut out),
        Command::Translate(a) => commands::translate(a, &mut out),
        Command::Check(a) => commands::check(a, &mut out),
        Command::Gen(a) => commands::gen(a, &mut out),
        Command::Bench(a) => commands::bench(a, &mut out),
    };
    // a closed pipe downstream is not an error
    let _ = io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Mismatch) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
