use clap::{Parser, Subcommand};
use phasecli::commands::{self, RunError};
use phasecli::config::{ConfigError, ConfigLayer, RunConfig};
use phasecli::verify::VerifyOptions;
use phasecli::WORKERS_ENV;
use std::path::PathBuf;
use std::process::ExitCode;

/// Phase diagrams of hard-core lattice bosons with power-law interactions.
///
/// Settings come from an optional TOML file (--config); flags override it.
#[derive(Parser)]
#[command(name = "phasecli", version)]
struct Cli {
    /// Flat TOML file with the same keys as the flags (snake_case)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    settings: ConfigLayer,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Zeroth-order devil's staircase
    Staircase,
    /// Strong-coupling phase boundaries of the 1/n lobes
    Lobes,
    /// Exact-diagonalization chemical potentials at one filling
    EdSweep,
    /// Run the cross-validation battery; exits 1 on any failure
    Verify {
        /// Skip the slow exact-diagonalization studies
        #[arg(long)]
        quick: bool,
        #[arg(long, hide = true, default_value_t = 6)]
        pi_power: i32,
    },
    /// Lobes overlaid with extrapolated ED points
    Diagram,
}

fn configure_workers() -> Result<(), ConfigError> {
    let Ok(text) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let bad = || ConfigError::Field {
        field: WORKERS_ENV,
        message: format!("expected a positive integer, got `{text}`"),
    };
    let n: usize = text.trim().parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    // fails only if a pool already exists, which cannot happen here
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn run(cli: Cli) -> Result<(), RunError> {
    configure_workers()?;
    let file = match &cli.config {
        Some(path) => ConfigLayer::load(path)?,
        None => ConfigLayer::default(),
    };
    let cfg = RunConfig::from_layer(cli.settings.over(file))?;
    let written = match cli.command {
        Command::Staircase => commands::staircase(&cfg)?,
        Command::Lobes => commands::lobes(&cfg)?,
        Command::EdSweep => commands::ed_sweep(&cfg)?,
        Command::Diagram => commands::diagram(&cfg)?,
        Command::Verify { quick, pi_power } => {
            return commands::verify(&VerifyOptions { quick, pi_power });
        }
    };
    for path in written {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("phasecli: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
