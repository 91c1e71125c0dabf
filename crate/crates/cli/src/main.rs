//! `padic-density`: tables, verification, sampling and exhaustive checks for
//! the densities of `p`-adic polynomials with a given number of roots.
//!
//! Exit status is 0 on success, 1 when a verification fails (or, with
//! `--strict`, when sampling raises a warning) and 2 on usage errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use padic_density::densities::Format;
use padic_density::oracle::Mode;

/// Environment variable naming the directory that relative `--output` paths
/// are resolved against.
pub const OUTPUT_DIR_ENV: &str = "PADIC_DENSITY_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "padic-density", version, about = "Exact densities of p-adic polynomials by number of roots")]
struct Cli {
    /// Output format (each command has its own default).
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<Format>,

    /// Write to this file instead of stdout. Relative paths are taken
    /// relative to $PADIC_DENSITY_OUTPUT_DIR when it is set.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print density grids or generating polynomials.
    Table(TableArgs),
    /// Run the symbolic identity suite; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Monte Carlo comparison of sampled root counts with the exact values.
    Sample(SampleArgs),
    /// Limits of the grids as p grows.
    Limits(LimitsArgs),
    /// Enumerate every polynomial at a small precision and bracket the exact
    /// probabilities.
    Exhaust(ExhaustArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Bounds {
    /// Largest degree n.
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
    /// Largest set size d (defaults to min(6, n_max); must not exceed n_max).
    #[arg(long)]
    pub d_max: Option<usize>,
}

impl Bounds {
    pub fn resolve(&self) -> Result<(usize, usize), commands::Failure> {
        let d_max = self.d_max.unwrap_or(self.n_max.min(6));
        if d_max > self.n_max {
            return Err(commands::Failure::Usage(format!("--d-max {d_max} exceeds --n-max {}", self.n_max)));
        }
        Ok((self.n_max, d_max))
    }
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// Grids to print: alpha, beta, rho, alpha_tilde, alpha_star, beta_star,
    /// rho_star or all. Defaults to all unless --genfun is given.
    #[arg(long, value_delimiter = ',')]
    pub grid: Vec<String>,
    /// Only row n.
    #[arg(long)]
    pub n: Option<usize>,
    /// Only column d (the root count r for star grids).
    #[arg(long, short = 'd', alias = "r")]
    pub d: Option<usize>,
    /// Generating polynomials to print: A, B, R.
    #[arg(long, value_delimiter = ',', value_parser = parse_series)]
    pub genfun: Vec<padic_density::densities::SeriesKind>,
    #[command(flatten)]
    pub bounds: Bounds,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub bounds: Bounds,
    /// Test hook: add 1 to the irreducible count N_d before verifying.
    #[arg(long, hide = true)]
    pub corrupt_irreducible: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    /// Degrees to sample.
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4])]
    pub n: Vec<usize>,
    /// Primes to sample at.
    #[arg(long, alias = "p", value_delimiter = ',', default_values_t = [2u64, 3, 5])]
    pub primes: Vec<u64>,
    /// Coefficient distributions: general, monic, monic_xn.
    #[arg(long, value_delimiter = ',', value_parser = parse_mode, default_values = ["general", "monic", "monic_xn"])]
    pub mode: Vec<Mode>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Initial precision in p-adic digits.
    #[arg(long, default_value_t = padic_density::oracle::DEFAULT_K0)]
    pub k0: u32,
    /// Precision at which undetermined trials are abandoned.
    #[arg(long, default_value_t = padic_density::oracle::DEFAULT_PRECISION_CAP)]
    pub precision_cap: u32,
    /// Treat warnings (too many abandoned trials) as failures.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args, Debug)]
pub struct LimitsArgs {
    /// Grids to take limits of (defaults to all).
    #[arg(long, value_delimiter = ',')]
    pub grid: Vec<String>,
    #[command(flatten)]
    pub bounds: Bounds,
}

#[derive(Args, Debug)]
pub struct ExhaustArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, alias = "prime", default_value_t = 2)]
    pub p: u64,
    /// Precision K in p-adic digits.
    #[arg(long = "precision", short = 'K', default_value_t = 4)]
    pub precision: u32,
    #[arg(long, value_parser = parse_mode, default_value = "general")]
    pub mode: Mode,
    /// Largest number of polynomials to enumerate.
    #[arg(long, default_value_t = padic_density::oracle::DEFAULT_BUDGET)]
    pub budget: u128,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: padic_density::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: padic_density::Error| e.to_string())
}

fn parse_series(s: &str) -> Result<padic_density::densities::SeriesKind, String> {
    s.parse().map_err(|e: padic_density::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Table(a) => commands::table(a, cli.format),
        Command::Verify(a) => commands::verify(a, cli.format),
        Command::Sample(a) => commands::sample(a, cli.format),
        Command::Limits(a) => commands::limits(a, cli.format),
        Command::Exhaust(a) => commands::exhaust(a, cli.format),
    };
    match result.and_then(|out| commands::emit(&out, cli.output.as_deref())) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}
