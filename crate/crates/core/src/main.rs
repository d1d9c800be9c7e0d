use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use telepassive::cli::{cmd_check, cmd_scatter, cmd_simulate, cmd_sweep, RunConfig, EXIT_ERROR};
use telepassive::freq::{CouplingDomain, DEFAULT_GRID_POINTS, DEFAULT_OMEGA_MIN};

/// Passivity checks and simulation of sampled-data bilateral teleoperators.
///
/// Exit codes: 0 passive / success, 2 passivity violated or run diverged, 1 error.
#[derive(Debug, Parser)]
#[command(name = "telepassive", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Frequency-domain passivity check of both controllers
    Check(Args),
    /// Write the passivity condition and scattering sweeps as CSV
    Sweep(Args),
    /// Simulate the scenario and write the trace
    Simulate(Args),
    /// Scattering-matrix sweep of the coupled two-port
    Scatter(Args),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Domain {
    Continuous,
    Discrete,
}

#[derive(Debug, clap::Args)]
struct Args {
    /// Scenario file (`section.key = value` lines)
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Frequency grid size; 1 evaluates only the Nyquist frequency
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    grid_points: usize,
    /// Lowest swept frequency in rad/s
    #[arg(long, default_value_t = DEFAULT_OMEGA_MIN)]
    omega_min: f64,
    /// Override the operator's exogenous force magnitude (N·m)
    #[arg(long)]
    force_magnitude: Option<f64>,
    /// Controller model used for the scattering matrix
    #[arg(long, value_enum, default_value = "continuous")]
    domain: Domain,
    /// Also write the effective scenario to <out>/scenario.cfg
    #[arg(long)]
    dump_config: bool,
}

impl From<&Args> for RunConfig {
    fn from(a: &Args) -> Self {
        RunConfig {
            config: a.config.clone(),
            out: a.out.clone(),
            grid_points: a.grid_points,
            omega_min: a.omega_min,
            force_magnitude: a.force_magnitude,
            domain: match a.domain {
                Domain::Continuous => CouplingDomain::Continuous,
                Domain::Discrete => CouplingDomain::Discrete,
            },
            dump_config: a.dump_config,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let mut stdout = io::stdout().lock();
    let result = match &cli.command {
        Command::Check(a) => cmd_check(&a.into(), &mut stdout),
        Command::Sweep(a) => cmd_sweep(&a.into(), &mut stdout),
        Command::Simulate(a) => cmd_simulate(&a.into(), &mut stdout),
        Command::Scatter(a) => cmd_scatter(&a.into(), &mut stdout),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
