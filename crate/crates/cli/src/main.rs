use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mirror_fidelity_cli::exec::Parallel;
use mirror_fidelity_cli::map::run_map;
use mirror_fidelity_cli::output::{to_json, write_text};
use mirror_fidelity_cli::simulate::{simulate, StrategyChoice};
use mirror_fidelity_cli::solve::solve;
use mirror_fidelity_cli::verify::run_verify;
use mirror_fidelity_cli::{ensemble_from_degrees, CliError, Result};

/// Maximum-fidelity and minimum-error strategies for mirror-symmetric qubit
/// ensembles.
#[derive(Parser)]
#[command(name = "mirrorfid", version)]
struct Cli {
    /// Worker threads for grid commands and simulation (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Optimal,
    Minerror,
    Upd,
    Lr,
}

impl From<Strategy> for StrategyChoice {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::Optimal => StrategyChoice::Optimal,
            Strategy::Minerror => StrategyChoice::Minerror,
            Strategy::Upd => StrategyChoice::Upd,
            Strategy::Lr => StrategyChoice::Lr,
        }
    }
}

#[derive(Args)]
struct EnsembleArgs {
    /// Prior of each mirror state, in [0, 1/2].
    #[arg(long = "p", allow_negative_numbers = true)]
    p: f64,
    /// Half-opening angle of the mirror pair in degrees, in [0, 90].
    #[arg(long = "theta-deg", allow_negative_numbers = true)]
    theta_deg: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal fidelity strategy and minimum-error strategy for one ensemble.
    Solve {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regime map over (p, θ) as CSV, plus the two boundary curves.
    Map {
        /// Grid points along each axis.
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Points along p (overrides --grid).
        #[arg(long)]
        p_steps: Option<usize>,
        /// Points along θ (overrides --grid).
        #[arg(long)]
        theta_steps: Option<usize>,
        /// Map CSV path. Boundaries go to `<stem>_fidelity_boundary.csv`
        /// and `<stem>_minerror_boundary.csv` alongside it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check closed forms against the oracles on a grid.
    Verify {
        #[arg(long, default_value_t = 25)]
        grid: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo intercept-resend simulation of a strategy.
    Simulate {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "optimal")]
        strategy: Strategy,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let exec = Parallel::new(cli.threads);
    match cli.command {
        Command::Solve {
            ensemble,
            format: Format::Json,
            out,
        } => {
            let e = ensemble_from_degrees(ensemble.p, ensemble.theta_deg)?;
            emit(&to_json(&solve(&e)), out.as_ref())
        }
        Command::Map {
            grid,
            p_steps,
            theta_steps,
            out,
        } => {
            let written = run_map(
                p_steps.unwrap_or(grid),
                theta_steps.unwrap_or(grid),
                &out,
                &exec,
            )?;
            eprintln!(
                "wrote {} rows to {}; boundaries in {} and {}",
                written.rows,
                written.map.display(),
                written.fidelity_boundary.display(),
                written.minerror_boundary.display()
            );
            Ok(())
        }
        Command::Verify {
            grid,
            seed,
            format,
            out,
        } => {
            if grid < 2 {
                return Err(CliError::Usage("--grid must be at least 2".into()));
            }
            let report = run_verify(grid, seed, &exec);
            let text = match format {
                Some(Format::Json) => to_json(&report),
                None => report.summary(),
            };
            emit(&text, out.as_ref())?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Verification(report.failures().join(", ")))
            }
        }
        Command::Simulate {
            ensemble,
            trials,
            seed,
            strategy,
            format: Format::Json,
            out,
        } => {
            if trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            let e = ensemble_from_degrees(ensemble.p, ensemble.theta_deg)?;
            let report = simulate(&e, strategy.into(), trials, seed, &exec)?;
            emit(&to_json(&report), out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
