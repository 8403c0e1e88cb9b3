mod commands;
mod error;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hardy_core::norms::{NormConfig, Policy, DEFAULT_SHARDS};
use hardy_core::polyalg::DEFAULT_TERM_CAP;

#[derive(Parser, Debug)]
#[command(name = "hardy", version, about = "Hardy-space norms of Dirichlet polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// H_p norm of a Dirichlet polynomial read from a JSON file.
    Norm {
        file: PathBuf,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// H_q / H_p quotient of a Dirichlet polynomial.
    Ratio {
        file: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Lower-bound report for the extremal family D_x.
    Extremal {
        #[arg(long, conflicts_with = "x_grid", required_unless_present = "x_grid")]
        x: Option<f64>,
        /// Geometric grid `start:stop:factor`.
        #[arg(long)]
        x_grid: Option<String>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 4.0)]
        q: f64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Certified upper bound for every polynomial of length x.
    Bounds {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        /// Smoothness parameter; defaults to the optimal choice.
        #[arg(long)]
        y: Option<f64>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Count (and optionally list) the y-smooth integers up to x.
    Smooth {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Test the conjectured homogeneous constant on a random corpus.
    Conjecture {
        #[arg(long, default_value_t = 5)]
        m_max: u32,
        #[arg(long, default_value_t = 100)]
        corpus_size: usize,
        #[arg(long, default_value_t = 6)]
        max_vars: u32,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 4.0)]
        q: f64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Partial sums of the multiplier summability series.
    Multiplier {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Family parameter(s): sigma, c, or comma-separated table values.
        #[arg(long, allow_hyphen_values = true)]
        params: String,
        /// Last index of the series.
        #[arg(long = "N", visible_alias = "n")]
        big_n: u64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 4.0)]
        q: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Emit every `stride`-th table row.
        #[arg(long, default_value_t = 1)]
        stride: u64,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Power,
    LogDecay,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Require exact evaluation.
    #[arg(long, conflicts_with = "mc")]
    exact: bool,
    /// Force Monte Carlo evaluation.
    #[arg(long)]
    mc: bool,
    #[arg(long, default_value_t = DEFAULT_TERM_CAP, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    term_cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    pub fn norm_config(&self) -> NormConfig {
        let policy = if self.exact {
            Policy::Exact
        } else if self.mc {
            Policy::MonteCarlo
        } else {
            Policy::Auto
        };
        NormConfig { policy, samples: self.samples, seed: self.seed, shards: DEFAULT_SHARDS, term_cap: self.term_cap }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
