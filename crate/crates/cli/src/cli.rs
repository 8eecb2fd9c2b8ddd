//! Argument parsing and command dispatch.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration or i/o
//! error (including argument parse errors, which clap reports itself with
//! code 2), 3 domain error from the numerical layer.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, CommandOutcome};
use crate::config::{CliError, OutputFormat, RunConfig, ScenarioSelection, UnitsPreset};
use crate::verify;

#[derive(Parser, Debug)]
#[command(
    name = "entrogeo",
    version,
    about = "Information-geometric analysis of driven two-level systems",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate closed-form success and failure probabilities over theta
    Probabilities(CommonArgs),
    /// Compare closed-form and finite-difference Fisher information
    Fisher(CommonArgs),
    /// Trace geodesics: closed form, numeric integration, speed, residual
    Geodesic(CommonArgs),
    /// Entropic speed, production rate, and efficiency of the scenarios
    Compare(CommonArgs),
    /// Map where the exponential drive outruns the power-law drive
    Region(CommonArgs),
    /// Run the built-in verification suite
    Verify(CommonArgs),
}

/// Flags shared by every subcommand.  Each flag overrides the matching
/// field of the JSON config file (when given) or the built-in default.
#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// Path to a JSON configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Scenario selection
    #[arg(long, value_enum)]
    pub scenario: Option<ScenarioSelection>,
    /// Transverse intensity scale as a rate, gamma/hbar
    #[arg(long = "gamma-over-hbar", allow_negative_numbers = true)]
    pub gamma_over_hbar: Option<f64>,
    /// Envelope rate lambda
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Transverse rotation rate omega0 (must be negative)
    #[arg(long, allow_negative_numbers = true)]
    pub omega0: Option<f64>,
    /// Initial coordinate theta(xi0)
    #[arg(long, allow_negative_numbers = true)]
    pub theta0: Option<f64>,
    /// Initial coordinate velocity
    #[arg(long, allow_negative_numbers = true)]
    pub thetadot0: Option<f64>,
    /// Initial affine parameter
    #[arg(long, allow_negative_numbers = true)]
    pub xi0: Option<f64>,
    /// Evolution window length
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    /// Metric normalization (0.5 or 1.0)
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    /// Unit system preset
    #[arg(long, value_enum)]
    pub units: Option<UnitsPreset>,
    /// Pin gamma = (h/4)*lambda (full sweep reaches unit success)
    #[arg(long = "unit-success")]
    pub unit_success: bool,
    /// Derive lambda = 4*gamma/h from gamma
    #[arg(long = "coupled-lambda")]
    pub coupled_lambda: bool,
    /// Tabulated samples (grid points per axis for `region`)
    #[arg(long)]
    pub samples: Option<usize>,
    /// Integrator steps for the Schroedinger propagation
    #[arg(long)]
    pub steps: Option<usize>,
    /// Upper end of the theta tabulation range
    #[arg(long = "theta-max", allow_negative_numbers = true)]
    pub theta_max: Option<f64>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Significant digits for rendered values (6..=17)
    #[arg(long)]
    pub precision: Option<usize>,
}

/// Parse the process arguments, run the selected command, and return the
/// process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(outcome) => {
            if outcome.verification_failed {
                1
            } else {
                0
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<CommandOutcome, CliError> {
    let (args, runner): (&CommonArgs, fn(&RunConfig) -> Result<CommandOutcome, CliError>) =
        match &cli.command {
            Command::Probabilities(a) => (a, commands::probabilities),
            Command::Fisher(a) => (a, commands::fisher),
            Command::Geodesic(a) => (a, commands::geodesic),
            Command::Compare(a) => (a, commands::compare),
            Command::Region(a) => (a, commands::region),
            Command::Verify(a) => (a, verify::verify),
        };
    let cfg = RunConfig::load(args)?;
    let outcome = runner(&cfg)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, outcome.text.as_bytes())?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(outcome.text.as_bytes())?;
        }
    }
    Ok(outcome)
}
