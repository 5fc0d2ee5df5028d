//! `epkit`: build models, metrics, secular polynomials, sweeps and
//! exceptional-point reports from a JSON model spec.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::output::CliError;

#[derive(Parser, Debug)]
#[command(name = "epkit", version, about = "Exceptional points of non-Hermitian tridiagonal models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output directory (created if missing).
    #[arg(long, default_value = "epkit-out")]
    pub out: PathBuf,
    /// Omit the timestamp from the run manifest.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SpecArgs {
    /// Model spec (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    /// Diagonal shift overriding the spec's, e.g. 2 or 1/2.
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct PathArgs {
    /// Coupling slots along the path, e.g. "t,-t,t,-9/10"; defaults to the
    /// spec's "path" field.
    #[arg(long, allow_hyphen_values = true)]
    pub path: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dump the exact matrix (JSON) and its float form (CSV).
    Build {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Build the diagonal metric (or the tridiagonal mixture) and certify it.
    Metric {
        #[command(flatten)]
        spec: SpecArgs,
        /// Use diag(z) + v P and report the admissible v interval.
        #[arg(long)]
        tridiag: bool,
        /// Mixing weight v (implies --tridiag).
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
        /// Bracket width for the admissible interval.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Exact secular polynomial along a path.
    Secular {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        path: PathArgs,
        /// Also evaluate at this t and report root multiplicities.
        #[arg(long, allow_hyphen_values = true)]
        eval_t: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Eigenvalue sweep along a path (CSV) plus complexification events.
    Sweep {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        path: PathArgs,
        /// Grid lo:hi:step.
        #[arg(long, allow_hyphen_values = true, default_value = "-3/2:3/2:1/100")]
        grid: String,
        /// Bracket width for refined events.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Order CSV columns along continuous tracks instead of by value.
        #[arg(long)]
        tracks: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Exact exceptional-point report along a path.
    Ep {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        path: PathArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Check the embedded polynomial fixture.
    VerifyFixtures {
        #[command(flatten)]
        common: Common,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build { spec, common } => commands::build(&spec, &common),
        Command::Metric { spec, tridiag, v, tol, common } => commands::metric(&spec, tridiag, v.as_deref(), tol, &common),
        Command::Secular { spec, path, eval_t, common } => commands::secular(&spec, &path, eval_t.as_deref(), &common),
        Command::Sweep { spec, path, grid, tol, tracks, common } => {
            commands::sweep(&spec, &path, &grid, tol, tracks, &common)
        }
        Command::Ep { spec, path, common } => commands::ep(&spec, &path, &common),
        Command::VerifyFixtures { common } => commands::verify_fixtures(&common),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
