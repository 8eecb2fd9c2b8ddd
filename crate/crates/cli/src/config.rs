//! Run configuration: defaults, JSON config files, flag overlays, validation.
//!
//! Every subcommand consumes the same configuration surface.  Parameters are
//! resolved in three layers: built-in defaults, then an optional JSON config
//! file, then command-line flags.  Validation happens once, after the layers
//! are merged, so a bad value is reported the same way no matter where it
//! came from.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use entrogeo_core::{MetricConvention, PhysicalConstants, ScenarioKind, ScenarioSpec};

use crate::cli::CommonArgs;

/// Errors surfaced by the command-line layer.
///
/// Exit-code contract:
/// * configuration problems (bad flag values, unreadable or malformed config
///   files, I/O failures) exit with code 2;
/// * domain violations reported by the numerical layer (initial conditions
///   outside a validity window, singular integrations, ...) exit with code 3;
/// * a verification run whose checks do not all pass exits with code 1, but
///   that is signalled through the command outcome rather than this type.
#[derive(Debug)]
pub enum CliError {
    /// A named configuration field failed validation.
    Config { field: String, message: String },
    /// The numerical layer rejected the request at runtime.
    Domain(entrogeo_core::Error),
    /// Reading or writing a file failed.
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Io(_) => 2,
            CliError::Domain(_) => 3,
        }
    }

    pub fn config(field: &str, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { field, message } => {
                write!(f, "invalid configuration for `{field}`: {message}")
            }
            CliError::Domain(e) => write!(f, "domain error: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<entrogeo_core::Error> for CliError {
    fn from(e: entrogeo_core::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Which driving scenarios a command should process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioSelection {
    All,
    Constant,
    Oscillatory,
    #[value(name = "powerlaw")]
    #[serde(rename = "powerlaw")]
    PowerLaw,
    Exponential,
}

impl ScenarioSelection {
    /// The concrete scenario kinds selected, in canonical order.
    pub fn kinds(self) -> Vec<ScenarioKind> {
        match self {
            ScenarioSelection::All => vec![
                ScenarioKind::Constant,
                ScenarioKind::Oscillatory,
                ScenarioKind::PowerLaw,
                ScenarioKind::Exponential,
            ],
            ScenarioSelection::Constant => vec![ScenarioKind::Constant],
            ScenarioSelection::Oscillatory => vec![ScenarioKind::Oscillatory],
            ScenarioSelection::PowerLaw => vec![ScenarioKind::PowerLaw],
            ScenarioSelection::Exponential => vec![ScenarioKind::Exponential],
        }
    }
}

/// Unit system preset used to build [`PhysicalConstants`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum UnitsPreset {
    Natural,
    Mksa,
}

impl UnitsPreset {
    pub fn constants(self) -> PhysicalConstants {
        match self {
            UnitsPreset::Natural => PhysicalConstants::natural(),
            UnitsPreset::Mksa => PhysicalConstants::mksa(),
        }
    }
}

/// Output serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

fn default_scenario() -> ScenarioSelection {
    ScenarioSelection::All
}
fn default_gamma_over_hbar() -> f64 {
    0.5
}
fn default_lambda() -> f64 {
    std::f64::consts::FRAC_1_PI
}
fn default_omega0() -> f64 {
    -1.0
}
fn default_theta0() -> f64 {
    1.0
}
fn default_thetadot0() -> f64 {
    1.0
}
fn default_xi0() -> f64 {
    0.0
}
fn default_tau() -> f64 {
    1.0
}
fn default_kappa() -> f64 {
    0.5
}
fn default_units() -> UnitsPreset {
    UnitsPreset::Natural
}
fn default_samples() -> usize {
    201
}
fn default_steps() -> usize {
    4000
}
fn default_theta_max() -> f64 {
    5.0
}
fn default_format() -> OutputFormat {
    OutputFormat::Csv
}
fn default_precision() -> usize {
    12
}

/// Fully resolved run configuration shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Scenario selection.
    pub scenario: ScenarioSelection,
    /// Transverse intensity scale expressed as a rate, Γ/ħ.
    pub gamma_over_hbar: f64,
    /// Envelope rate λ of the time-dependent scenarios.
    pub lambda: f64,
    /// Transverse phase rotation rate ω₀ (must be negative).
    pub omega0: f64,
    /// Initial coordinate θ(ξ₀) for geodesic and entropic quantities.
    pub theta0: f64,
    /// Initial coordinate velocity θ̇(ξ₀).
    pub thetadot0: f64,
    /// Initial evolution parameter ξ₀.
    pub xi0: f64,
    /// Evolution window length τ.
    pub tau: f64,
    /// Metric normalization κ (0.5 or 1.0).
    pub kappa: f64,
    /// Unit system preset.
    pub units: UnitsPreset,
    /// Pin Γ = (h/4)λ so a full sweep reaches unit success probability.
    pub unit_success: bool,
    /// Derive λ = 4Γ/h from Γ instead of using `lambda` directly.
    pub coupled_lambda: bool,
    /// Number of tabulated samples (grid points per axis for `region`).
    pub samples: usize,
    /// Number of integrator steps for the Schrödinger propagation.
    pub steps: usize,
    /// Upper end of the θ tabulation range.
    pub theta_max: f64,
    /// Output format.
    pub format: OutputFormat,
    /// Output file path; stdout when absent.
    pub output: Option<PathBuf>,
    /// Significant digits for rendered values (6..=17).
    pub precision: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: default_scenario(),
            gamma_over_hbar: default_gamma_over_hbar(),
            lambda: default_lambda(),
            omega0: default_omega0(),
            theta0: default_theta0(),
            thetadot0: default_thetadot0(),
            xi0: default_xi0(),
            tau: default_tau(),
            kappa: default_kappa(),
            units: default_units(),
            unit_success: false,
            coupled_lambda: false,
            samples: default_samples(),
            steps: default_steps(),
            theta_max: default_theta_max(),
            format: default_format(),
            output: None,
            precision: default_precision(),
        }
    }
}

impl RunConfig {
    /// Merge defaults, an optional JSON config file, and flag overrides.
    pub fn load(args: &CommonArgs) -> Result<RunConfig, CliError> {
        let mut cfg = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::config("config", format!("cannot read {}: {e}", path.display()))
                })?;
                serde_json::from_str::<RunConfig>(&text)
                    .map_err(|e| CliError::config("config", format!("invalid config: {e}")))?
            }
            None => RunConfig::default(),
        };
        cfg.apply_overrides(args);
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_overrides(&mut self, args: &CommonArgs) {
        if let Some(v) = args.scenario {
            self.scenario = v;
        }
        if let Some(v) = args.gamma_over_hbar {
            self.gamma_over_hbar = v;
        }
        if let Some(v) = args.lambda {
            self.lambda = v;
        }
        if let Some(v) = args.omega0 {
            self.omega0 = v;
        }
        if let Some(v) = args.theta0 {
            self.theta0 = v;
        }
        if let Some(v) = args.thetadot0 {
            self.thetadot0 = v;
        }
        if let Some(v) = args.xi0 {
            self.xi0 = v;
        }
        if let Some(v) = args.tau {
            self.tau = v;
        }
        if let Some(v) = args.kappa {
            self.kappa = v;
        }
        if let Some(v) = args.units {
            self.units = v;
        }
        if args.unit_success {
            self.unit_success = true;
        }
        if args.coupled_lambda {
            self.coupled_lambda = true;
        }
        if let Some(v) = args.samples {
            self.samples = v;
        }
        if let Some(v) = args.steps {
            self.steps = v;
        }
        if let Some(v) = args.theta_max {
            self.theta_max = v;
        }
        if let Some(v) = args.format {
            self.format = v;
        }
        if let Some(v) = &args.output {
            self.output = Some(v.clone());
        }
        if let Some(v) = args.precision {
            self.precision = v;
        }
    }

    /// Check every field that the command layer owns.  Signs and windows on
    /// the physics side (θ₀ > 0, validity intervals, ...) are enforced by the
    /// numerical layer and reported as domain errors instead.
    pub fn validate(&self) -> Result<(), CliError> {
        let positive = |name: &str, v: f64| -> Result<(), CliError> {
            if !v.is_finite() || v <= 0.0 {
                return Err(CliError::config(name, format!("must be finite and > 0, got {v}")));
            }
            Ok(())
        };
        positive("gamma_over_hbar", self.gamma_over_hbar)?;
        positive("lambda", self.lambda)?;
        positive("tau", self.tau)?;
        positive("theta_max", self.theta_max)?;
        if !self.omega0.is_finite() || self.omega0 >= 0.0 {
            return Err(CliError::config(
                "omega0",
                format!("must be finite and < 0, got {}", self.omega0),
            ));
        }
        for (name, v) in [
            ("theta0", self.theta0),
            ("thetadot0", self.thetadot0),
            ("xi0", self.xi0),
        ] {
            if !v.is_finite() {
                return Err(CliError::config(name, format!("must be finite, got {v}")));
            }
        }
        if MetricConvention::from_kappa(self.kappa).is_err() {
            return Err(CliError::config(
                "kappa",
                format!("must be 0.5 or 1.0, got {}", self.kappa),
            ));
        }
        if self.samples < 3 {
            return Err(CliError::config(
                "samples",
                format!("must be at least 3, got {}", self.samples),
            ));
        }
        if self.steps == 0 {
            return Err(CliError::config("steps", "must be at least 1"));
        }
        if !(6..=17).contains(&self.precision) {
            return Err(CliError::config(
                "precision",
                format!("must lie in 6..=17, got {}", self.precision),
            ));
        }
        Ok(())
    }

    pub fn constants(&self) -> PhysicalConstants {
        self.units.constants()
    }

    pub fn convention(&self) -> MetricConvention {
        // Validation guarantees κ ∈ {0.5, 1.0}.
        MetricConvention::from_kappa(self.kappa).expect("kappa already validated")
    }

    /// Γ/ħ after applying the unit-success pin.  When `coupled_lambda` is
    /// set the configured Γ/ħ is authoritative and `unit_success` is ignored
    /// (λ is derived from Γ, not the other way around).
    pub fn effective_gamma_over_hbar(&self) -> f64 {
        if !self.coupled_lambda && self.unit_success {
            std::f64::consts::FRAC_PI_2 * self.lambda
        } else {
            self.gamma_over_hbar
        }
    }

    /// λ after applying the coupled-λ derivation λ = 4Γ/h.
    pub fn effective_lambda(&self) -> f64 {
        if self.coupled_lambda {
            let c = self.constants();
            4.0 * self.effective_gamma_over_hbar() * c.hbar / c.planck()
        } else {
            self.lambda
        }
    }

    /// Build the scenario specification for one kind under this config.
    pub fn spec_for(&self, kind: ScenarioKind) -> Result<ScenarioSpec, CliError> {
        let c = self.constants();
        let gamma = self.effective_gamma_over_hbar() * c.hbar;
        let spec = ScenarioSpec::new(kind, gamma, self.effective_lambda(), self.omega0, c)?;
        Ok(spec)
    }
}
