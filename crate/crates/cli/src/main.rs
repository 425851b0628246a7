//! `fracvar`: lemma suite, gradient checks, solvers and convergence studies.
//!
//! Exit codes: 0 pass, 1 numeric failure, 2 usage or configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod lemmas;

use commands::Failure;

#[derive(Debug, Parser)]
#[command(name = "fracvar", version, about = "Asymmetric fractional variational calculus toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Variational,
    Reference,
    /// Samples the case's exact solution instead of solving.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConvectionArg {
    Upwind,
    Centered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    L2,
    Linf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the fractional calculus lemma suite.
    Lemmas {
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Finest number of intervals; trends use n/8, n/4, n/2, n.
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        dim: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Action-gradient check and equivalence trend for a case config.
    Elcheck {
        config: PathBuf,
        #[arg(long, default_value_t = 20)]
        directions: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3)]
        epsilon: f64,
        /// Grid sizes for the equivalence trend (n_t = n_x).
        #[arg(long, value_delimiter = ',', default_value = "16,32,64,128")]
        levels: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a case and write the field CSV plus a JSON sidecar.
    Solve {
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = SolverArg::Variational)]
        solver: SolverArg,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        #[arg(long, value_enum, default_value_t = ConvectionArg::Upwind)]
        convection: ConvectionArg,
        /// Output CSV; defaults to `outputs.field` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two field CSVs on the same grid.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = NormArg::Linf)]
        norm: NormArg,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Convergence study for a catalog case id or a config file.
    Converge {
        target: String,
        #[arg(long, value_delimiter = ',', default_value = "32,64,128,256")]
        levels: Vec<usize>,
        #[arg(long, value_enum, default_value_t = SolverArg::Variational)]
        solver: SolverArg,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        #[arg(long, value_enum, default_value_t = ConvectionArg::Upwind)]
        convection: ConvectionArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn init_threads() -> Result<(), Failure> {
    match std::env::var("FRACVAR_THREADS") {
        Err(_) => Ok(()),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => {
                fracvar_core::exec::set_threads(n);
                Ok(())
            }
            _ => Err(Failure::Usage(format!("FRACVAR_THREADS must be an integer >= 1, got `{s}`"))),
        },
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    init_threads()?;
    match cli.command {
        Command::Lemmas { alpha, n, dim, out } => commands::lemmas(alpha, n, dim as usize, out.as_deref()),
        Command::Elcheck { config, directions, seed, epsilon, levels, out } => {
            commands::elcheck(&config, directions, seed, epsilon, &levels, out.as_deref())
        }
        Command::Solve { config, solver, theta, convection, out } => {
            commands::solve(&config, solver, theta, convection, out.as_deref())
        }
        Command::Compare { a, b, norm, tol } => commands::compare(&a, &b, norm, tol),
        Command::Converge { target, levels, solver, theta, convection, out } => {
            commands::converge(&target, &levels, solver, theta, convection, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
