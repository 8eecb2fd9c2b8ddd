//! Command-line layer over the core toolkit: configuration resolution,
//! deterministic CSV/JSON rendering, five tabulating subcommands, and a
//! self-verification suite.
//!
//! The binary is `entrogeo`; see [`cli::run`] for the exit-code contract.

#![forbid(unsafe_code)]

pub mod cli;
pub mod commands;
pub mod config;
pub mod emit;
pub mod verify;

pub use cli::run;
pub use commands::CommandOutcome;
pub use config::{CliError, OutputFormat, RunConfig, ScenarioSelection, UnitsPreset};
pub use emit::{CheckResult, ReportDocument, TableDocument, VerificationSummary};
