//! `bernoulli-entropy`: Poisson entropy, Chen-Stein bounds and the exact oracle
//! from the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod input;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bernoulli_entropy::Error;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use commands::{Ctx, Simulate};
use output::{Document, Format, Units};

/// Environment variable holding the Monte Carlo thread count.
pub const THREADS_ENV: &str = "BERNOULLI_ENTROPY_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::ConditionViolated(_) | Error::NoApplicableBound { .. }) => 3,
            _ => 2,
        }
    }
}

#[derive(Parser)]
#[command(name = "bernoulli-entropy", version, about = "Certified Poisson approximation of the entropy of Bernoulli sums")]
struct Cli {
    /// Output layout.
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    format: Format,
    /// Display entropies in bits instead of nats.
    #[arg(long, global = true)]
    bits: bool,
    /// Absolute tolerance for Poisson entropies, in nats.
    #[arg(long, default_value_t = 1e-9, global = true)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Series,
    Asymptotic,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Series => "series",
            Method::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Theorem4,
    Corollary,
    Proposition,
    Best,
}

impl Rule {
    fn name(self) -> &'static str {
        match self {
            Rule::Theorem4 => "theorem4",
            Rule::Corollary => "corollary",
            Rule::Proposition => "proposition",
            Rule::Best => "best",
        }
    }
}

/// Exactly one of `--independent`, `--spec`, `--coeffs`.
#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).multiple(false)))]
pub struct Source {
    /// Independent summands described by --lambda, --sum-p2 and --m.
    #[arg(long, group = "source")]
    independent: bool,
    /// JSON dependency specification (m, marginals, neighborhoods, pair_expectations, b3).
    #[arg(long, group = "source", value_name = "FILE")]
    spec: Option<PathBuf>,
    /// Precomputed coefficients.
    #[arg(long, group = "source", value_name = "b1,b2,b3,lambda,log2m", value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Option<Vec<f64>>,
    #[arg(long, requires = "independent")]
    lambda: Option<f64>,
    #[arg(long = "sum-p2", requires = "independent")]
    sum_p2: Option<f64>,
    /// Number of summands; accepts forms like 1e8.
    #[arg(long, requires = "independent", value_parser = input::parse_count)]
    m: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy of Po(lambda).
    PoissonEntropy {
        #[arg(long)]
        lambda: f64,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Certified interval for H(W).
    EntropyBound {
        #[command(flatten)]
        source: Source,
        /// Defaults to best for independent input and theorem4 otherwise.
        #[arg(long, value_enum)]
        rule: Option<Rule>,
    },
    /// Total-variation bounds between W and Po(lambda).
    TvBounds {
        #[command(flatten)]
        source: Source,
    },
    /// Exact Poisson-binomial oracle.
    Exact {
        /// File or inline list of probabilities.
        #[arg(long)]
        probs: String,
    },
    /// Vertices of out-degree k in a randomly oriented n-cube.
    Hypercube {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Also run a Monte Carlo simulation (n <= 20).
        #[arg(long)]
        simulate: bool,
        #[arg(long, default_value_t = 100_000, requires = "simulate")]
        replicates: u64,
        #[arg(long, default_value_t = 1, requires = "simulate")]
        seed: u64,
    },
    /// Hypercube table: quoted versus recomputed values.
    Table1,
    /// Arithmetic-sequence example: quoted versus recomputed values.
    Example1,
}

fn run(cli: Cli, doc: &mut Document) -> Result<(), CliError> {
    if !(cli.tol > 0.0) {
        return Err(CliError::Input(format!("--tol must be positive, got {}", cli.tol)));
    }
    let ctx = Ctx {
        units: Units { bits: cli.bits },
        tol: cli.tol,
    };
    match cli.command {
        Command::PoissonEntropy { lambda, method } => commands::poisson_entropy_cmd(doc, &ctx, lambda, method),
        Command::EntropyBound { source, rule } => commands::entropy_bound_cmd(doc, &ctx, &source, rule),
        Command::TvBounds { source } => commands::tv_bounds_cmd(doc, &source),
        Command::Exact { probs } => commands::exact_cmd(doc, &ctx, &probs),
        Command::Hypercube { n, k, simulate, replicates, seed } => {
            let sim = simulate.then_some(Simulate { replicates, seed });
            commands::hypercube_cmd(doc, &ctx, n, k, sim)
        }
        Command::Table1 => commands::table1_cmd(doc, &ctx),
        Command::Example1 => commands::example1_cmd(doc, &ctx),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let format = cli.format;
    let mut doc = Document::new(argv);
    let outcome = run(cli, &mut doc).and_then(|()| {
        let mut stdout = std::io::stdout().lock();
        output::render(&doc, format, &mut stdout)?;
        stdout.flush()?;
        Ok(())
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Core(Error::ConditionViolated(c)) => eprintln!("condition violated: {c}"),
                CliError::Core(Error::NoApplicableBound { failed }) => {
                    eprintln!("no applicable bound; failed conditions:");
                    failed.iter().for_each(|c| eprintln!("  {c}"));
                }
                e => eprintln!("error: {e}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
