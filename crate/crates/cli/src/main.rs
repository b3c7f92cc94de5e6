//! `quartic`: batch front-end for the fourth-order operator library.
//!
//! Exit status is 0 on success, 2 for bad arguments or unreadable input and 1
//! for numerical or verification failures. Failures are reported on stderr as
//! a single JSON object.

mod commands;
mod failure;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quartic::Grid;

use crate::failure::Failure;

#[derive(Parser)]
#[command(name = "quartic", version, about = "Spectra, factorization and Darboux steps for d^4 + d u d + v")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Either a catalog entry or a JSON problem specification.
#[derive(Args, Clone, Debug)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Catalog name: 1-4, 5:k or follyton:kappa.
    #[arg(long)]
    pub example: Option<String>,
    /// Path to a JSON problem specification.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Lowest eigenvalues and eigenfunctions of L.
    Spectrum {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        k: usize,
        /// Overrides the spec grid: "xmin,xmax,n".
        #[arg(long, value_parser = parse_grid)]
        grid: Option<Grid>,
        #[arg(long)]
        out: PathBuf,
    },
    /// f, g and E0 of the ground-state factor with identity residuals.
    Factorize {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Removes the ground-state level and checks the spectra.
    Remove {
        #[command(flatten)]
        source: Source,
        /// Eigenvalues of the reduced operator to compare.
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The conserved functional Q, or the predicted jump with --delta.
    Qval {
        #[arg(long, required_unless_present_any = ["delta", "spec"], conflicts_with = "delta")]
        example: Option<String>,
        #[arg(long, conflicts_with_all = ["example", "delta"])]
        spec: Option<PathBuf>,
        #[arg(long, requires = "kappa")]
        delta: bool,
        #[arg(long)]
        kappa: Option<f64>,
    },
    /// Evolves catalog initial data on a periodic box.
    Evolve {
        #[arg(long)]
        initial: String,
        #[arg(long)]
        t_end: f64,
        #[arg(long, default_value_t = 512)]
        n: usize,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long)]
        snap: f64,
        /// Half-width of the periodic box; defaults to 24 pi.
        #[arg(long)]
        half_width: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Runs the invariant suite on a catalog entry or on `all`.
    Verify {
        #[arg(long)]
        example: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_grid(text: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [x_min, x_max, n] = parts.as_slice() else {
        return Err("expected \"xmin,xmax,n\"".into());
    };
    let number = |s: &str| s.parse::<f64>().map_err(|e| format!("{s}: {e}"));
    let n = n.parse::<usize>().map_err(|e| format!("{n}: {e}"))?;
    Grid::new(number(x_min)?, number(x_max)?, n, false).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Spectrum { spec, k, grid, out } => commands::spectrum(&spec, k, grid, &out),
        Command::Factorize { source, out } => commands::factorize(&source, out.as_deref()),
        Command::Remove { source, k, out } => commands::remove(&source, k, out.as_deref()),
        Command::Qval { example, spec, delta, kappa } => match (delta, kappa) {
            (true, Some(kappa)) => commands::delta_q(kappa),
            _ => commands::qval(&Source { example, spec }),
        },
        Command::Evolve { initial, t_end, n, dt, snap, half_width, out } => {
            let half = half_width.unwrap_or(24.0 * std::f64::consts::PI);
            commands::evolve(&initial, t_end, n, dt, snap, half, &out)
        }
        Command::Verify { example, out } => commands::verify(&example, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return Failure::BadArguments(e.render().to_string().trim().to_string()).report(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => failure.report(),
    }
}
