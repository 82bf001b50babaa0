//! `cmsimplex`: verification suites and estimators from the command line.
//!
//! Exit codes: 0 when every checked property holds, 1 when a property is
//! violated, 2 for usage or input errors (nothing is written in that case).

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "cmsimplex", version, about = "Multinomial probabilities on the simplex: verification suites and Bernstein estimators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// File of key=value lines; explicit flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Complete-monotonicity scan of the Γ-ratio function on random or given instances
    CmScan(CmScanArgs),
    /// Randomised checks of the three log-convexity inequalities
    IneqFuzz(IneqFuzzArgs),
    /// Convergence table of m^{d/2} times the simplex integral of S_{r,s,m};
    /// the exit code judges only r = s = 1, where m·|error| must stay bounded
    STable(STableArgs),
    /// Compare m^{d/2} S_{r,s,m}(x) with its Gaussian limit at a point
    LcltCompare(LcltArgs),
    /// Exact central-binomial lattice identity for m = 0..=M
    IdentityCheck(IdentityArgs),
    /// Evaluate a Bernstein estimator on a grid
    Estimate(EstimateArgs),
    /// Draw a Dirichlet sample
    SampleGen(SampleGenArgs),
}

#[derive(Debug, Args)]
pub struct CmScanArgs {
    /// Simplex dimension
    #[arg(long, default_value_t = 2)]
    d: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of seeded random instances
    #[arg(long, default_value_t = 50)]
    instances: i64,
    /// Grid of a values as lo:hi:step
    #[arg(long, default_value = "0.1:10:0.1")]
    grid: String,
    /// Highest order n checked (derivatives reach h^(n+1))
    #[arg(long, default_value_t = 6)]
    max_order: i64,
    /// Explicit weights γ_1..γ_{d+1} (comma separated); requires --x
    #[arg(long)]
    gamma: Option<String>,
    /// Explicit interior point x_1..x_d (comma separated); requires --gamma
    #[arg(long)]
    x: Option<String>,
    /// Scan deliberately corrupted instances; the run must then fail
    #[arg(long)]
    self_test_corrupt: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
pub struct IneqFuzzArgs {
    #[arg(long, default_value_t = 1000)]
    trials: i64,
    /// Largest dimension drawn
    #[arg(long, default_value_t = 5)]
    d: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Negate every margin; the run must then fail
    #[arg(long)]
    self_test_corrupt: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
pub struct STableArgs {
    #[arg(long, default_value_t = 1)]
    d: i64,
    #[arg(long, default_value = "10,20,40,80,160,320")]
    m_list: String,
    /// Comma-separated r values, paired with --s
    #[arg(long, default_value = "1")]
    r: String,
    /// Comma-separated s values, paired with --r
    #[arg(long, default_value = "1")]
    s: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
pub struct LcltArgs {
    #[arg(long, default_value_t = 1)]
    d: i64,
    #[arg(long, default_value = "16,64,256")]
    m_list: String,
    #[arg(long, default_value = "1")]
    r: String,
    #[arg(long, default_value = "1")]
    s: String,
    /// Interior point x_1..x_d (default: barycenter)
    #[arg(long)]
    x: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
pub struct IdentityArgs {
    #[arg(long, default_value_t = 2)]
    d: i64,
    /// Largest degree checked
    #[arg(long, default_value_t = 30)]
    m: i64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Sample CSV (header x1,...,xd)
    #[arg(long)]
    samples: PathBuf,
    /// simplex-cdf, hypercube-cdf or hypercube-density
    #[arg(long, default_value = "simplex-cdf")]
    kind: String,
    #[arg(long, default_value_t = 10)]
    m: i64,
    /// Grid resolution g: points k/g
    #[arg(long, default_value_t = 20)]
    grid: i64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
pub struct SampleGenArgs {
    /// Dirichlet parameters α_1..α_{d+1}; defaults to all ones
    #[arg(long)]
    alpha: Option<String>,
    /// Dimension when --alpha is absent
    #[arg(long, default_value_t = 2)]
    d: i64,
    #[arg(long, default_value_t = 1000)]
    n: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

/// How a run ended short of success.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, files or parameters: exit 2.
    Usage(String),
    /// A checked property does not hold: exit 1.
    Violation(String),
}

impl From<cmsimplex::Error> for Failure {
    fn from(e: cmsimplex::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let args = match config::merge_config(args) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let result = match cli.command {
        Command::CmScan(a) => commands::cm_scan(a),
        Command::IneqFuzz(a) => commands::ineq_fuzz(a),
        Command::STable(a) => commands::s_table(a),
        Command::LcltCompare(a) => commands::lclt_compare(a),
        Command::IdentityCheck(a) => commands::identity_check(a),
        Command::Estimate(a) => commands::estimate(a),
        Command::SampleGen(a) => commands::sample_gen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(msg)) => {
            eprintln!("FAIL: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
