//! Entropic speed, entropy-production rate, and efficiency of the four
//! driving scenarios, plus the parameter-region analysis comparing the
//! decaying envelopes.
//!
//! Along a geodesic of the statistical metric the entropic speed is the
//! conserved quantity v_E = κ·√F(θ₀)·θ̇₀, and the entropy production
//! accumulated over a duration τ is the action I(τ) = v_E²τ², so the
//! instantaneous rate can be quoted in two ways: the steady form
//! r_E = v_E² and the literal derivative dI/dτ = 2τ·v_E². Both are
//! provided; they differ by the factor 2τ exactly.
//!
//! Efficiencies are normalized per batch: η = 1 - r_E/r, with r the
//! smallest positive integer at or above every rate in the batch.

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::geodesic::{geodesic_action, geodesic_closed_form, InitialConditions};
use crate::infogeo::{fisher_analytic, MetricConvention};
use crate::numerics::bisect;
use crate::scenario::{lambda_of_gamma, ScenarioKind, ScenarioSpec};

/// Entropic speed v_E = κ·√F(θ₀)·θ̇₀ of the geodesic with the given
/// initial data on the scenario's statistical manifold.
pub fn entropic_speed(
    spec: &ScenarioSpec,
    convention: MetricConvention,
    ic: InitialConditions,
) -> Result<f64> {
    Ok(convention.kappa() * fisher_analytic(spec, ic.theta0())?.sqrt() * ic.thetadot0())
}

/// Steady entropy-production rate r_E = v_E².
pub fn entropy_production_rate(
    spec: &ScenarioSpec,
    convention: MetricConvention,
    ic: InitialConditions,
) -> Result<f64> {
    let v = entropic_speed(spec, convention, ic)?;
    Ok(v * v)
}

/// Literal entropy-production rate dI/dτ, evaluated by a central
/// difference of the geodesic action around the duration `tau`.
///
/// Along a geodesic I(τ) = v_E²τ² is exactly quadratic, so the central
/// difference carries no truncation error at any step size; a *large*
/// step (5% of the duration scale) is used deliberately, because the only
/// error left is quadrature noise in I itself, and that is amplified by
/// 1/δ. Equals 2τ·r_E.
pub fn entropy_production_rate_literal(
    spec: &ScenarioSpec,
    convention: MetricConvention,
    ic: InitialConditions,
    tau: f64,
) -> Result<f64> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            requirement: "must be finite and positive",
        });
    }
    let solution = geodesic_closed_form(spec, ic)?;
    let (_, hi) = solution.validity();
    let headroom = hi - (ic.xi0() + tau);
    if !(headroom > 0.0) {
        return Err(Error::OutsideDomain {
            what: "tau",
            value: tau,
            lo: 0.0,
            hi: hi - ic.xi0(),
        });
    }
    let delta = (0.05 * tau.max(1.0)).min(0.45 * tau).min(0.45 * headroom);
    let upper = geodesic_action(spec, convention, &solution, tau + delta)?;
    let lower = geodesic_action(spec, convention, &solution, tau - delta)?;
    Ok((upper.divergence - lower.divergence) / (2.0 * delta))
}

/// Batch efficiencies η = 1 - r_E/r with a shared integer normalizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyTable {
    /// Smallest positive integer at or above every rate in the batch.
    pub normalizer: u64,
    /// η for each input rate, in order; each lies in [0, 1).
    pub efficiencies: Vec<f64>,
}

/// Normalize a batch of entropy-production rates into efficiencies.
pub fn efficiency(rates: &[f64]) -> Result<EfficiencyTable> {
    if rates.is_empty() {
        return Err(Error::EmptyInput("efficiency needs at least one rate"));
    }
    let mut normalizer: u64 = 1;
    for &rate in rates {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidParameter {
                name: "rate",
                value: rate,
                requirement: "must be finite and positive",
            });
        }
        normalizer = normalizer.max(rate.ceil() as u64);
    }
    let r = normalizer as f64;
    Ok(EfficiencyTable {
        normalizer,
        efficiencies: rates.iter().map(|&rate| 1.0 - rate / r).collect(),
    })
}

/// Relative speed factor of each scenario at the common starting point:
/// v_E = 2κ(Γ/ħ)θ̇₀ × factor, with factor ∈ {1, |cos(λθ₀)|, (1+λθ₀)⁻²,
/// e^(-λθ₀)}. Returned sorted ascending by factor (ties keep the
/// canonical scenario order).
pub fn speed_ordering(lambda: f64, theta0: f64) -> Result<Vec<(ScenarioKind, f64)>> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            requirement: "must be finite and positive",
        });
    }
    if !(theta0.is_finite() && theta0 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "theta0",
            value: theta0,
            requirement: "must be finite and positive",
        });
    }
    let x = lambda * theta0;
    let mut factors = vec![
        (ScenarioKind::Constant, 1.0),
        (ScenarioKind::Oscillatory, x.cos().abs()),
        (ScenarioKind::PowerLaw, (1.0 + x).powi(-2)),
        (ScenarioKind::Exponential, (-x).exp()),
    ];
    factors.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    Ok(factors)
}

/// One point of the decaying-envelope comparison: which of the
/// exponential and power-law drives moves faster at λθ₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSample {
    pub lambda: f64,
    pub theta0: f64,
    /// f_P = e^(λθ₀)/(1+λθ₀)²; below 1 exactly where the exponential
    /// drive is faster.
    pub f_p: f64,
    /// Operational comparison of the two speed factors.
    pub exponential_faster: bool,
}

/// Compare the exponential and power-law speed factors at (λ, θ₀), both
/// through the direct speed comparison and through the indicator
/// f_P = e^(λθ₀)/(1+λθ₀)² < 1. The two are algebraically identical; their
/// agreement is asserted away from the float-resolution neighbourhood of
/// the boundary f_P = 1.
pub fn region_membership(lambda: f64, theta0: f64) -> Result<RegionSample> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            requirement: "must be finite and positive",
        });
    }
    if !(theta0.is_finite() && theta0 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "theta0",
            value: theta0,
            requirement: "must be finite and positive",
        });
    }
    let x = lambda * theta0;
    let exponential_faster = (-x).exp() > (1.0 + x).powi(-2);
    let f_p = x.exp() / (1.0 + x).powi(2);
    assert!(
        exponential_faster == (f_p < 1.0) || (f_p - 1.0).abs() <= 1e-12,
        "speed comparison and f_P indicator disagree at x = {x}"
    );
    Ok(RegionSample {
        lambda,
        theta0,
        f_p,
        exponential_faster,
    })
}

/// The boundary x* of the comparison region: the positive root of
/// e^x = (1+x)², located by bisection on [2, 3] to 1e-12. Below x* the
/// exponential drive is the faster of the two decaying envelopes.
pub fn region_boundary() -> f64 {
    // g(2) = e² - 9 < 0 and g(3) = e³ - 16 > 0, so the bracket holds by
    // construction.
    bisect(|x: f64| x.exp() - (1.0 + x) * (1.0 + x), 2.0, 3.0, 1e-13, 200)
        .expect("fixed bracket contains a sign change")
}

/// Parameters shared by all four scenarios in a comparison report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportParameters {
    /// Intensity scale as a rate, Γ/ħ.
    pub gamma_over_hbar: f64,
    /// Envelope rate λ (ignored in coupled mode).
    pub lambda: f64,
    /// Transverse rotation rate ω₀ (must be negative).
    pub omega0: f64,
    /// Common geodesic starting point θ₀.
    pub theta0: f64,
    /// Common initial slope θ̇₀.
    pub thetadot0: f64,
    /// When set, derive λ = 4Γ/h from Γ instead of taking `lambda`.
    pub coupled_lambda: bool,
}

impl Default for ReportParameters {
    fn default() -> Self {
        Self {
            gamma_over_hbar: 0.5,
            lambda: std::f64::consts::FRAC_1_PI,
            omega0: -1.0,
            theta0: 1.0,
            thetadot0: 1.0,
            coupled_lambda: false,
        }
    }
}

/// One scenario's row in a comparison report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioAssessment {
    pub kind: ScenarioKind,
    /// Qualitative behaviour class ("Grover-like" or "fixed-point-like").
    pub label: String,
    /// Entropic speed v_E.
    pub speed: f64,
    /// Steady entropy-production rate r_E = v_E².
    pub rate: f64,
    /// Batch-normalized efficiency η = 1 - r_E/r.
    pub efficiency: f64,
}

/// Side-by-side entropic comparison of all four scenarios at shared
/// parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropicReport {
    pub kappa: f64,
    pub gamma_over_hbar: f64,
    /// Effective envelope rate (derived from Γ in coupled mode).
    pub lambda: f64,
    pub theta0: f64,
    pub thetadot0: f64,
    /// Shared efficiency normalizer.
    pub normalizer: u64,
    /// One row per scenario, in canonical order.
    pub scenarios: Vec<ScenarioAssessment>,
}

/// Build the four-scenario comparison report. In coupled mode the envelope
/// rate is tied to the intensity scale through the unit-success relation
/// λ = 4Γ/h; otherwise `params.lambda` is used as given.
pub fn scenario_report(
    params: &ReportParameters,
    convention: MetricConvention,
    constants: &PhysicalConstants,
) -> Result<EntropicReport> {
    let gamma = params.gamma_over_hbar * constants.hbar;
    let lambda = if params.coupled_lambda {
        lambda_of_gamma(gamma, constants)?
    } else {
        params.lambda
    };
    let ic = InitialConditions::new(params.theta0, params.thetadot0, 0.0)?;

    let mut speeds = Vec::with_capacity(4);
    for kind in ScenarioKind::ALL {
        let spec = ScenarioSpec::new(kind, gamma, lambda, params.omega0, *constants)?;
        speeds.push(entropic_speed(&spec, convention, ic)?);
    }
    let rates: Vec<f64> = speeds.iter().map(|v| v * v).collect();
    let table = efficiency(&rates)?;

    let scenarios = ScenarioKind::ALL
        .iter()
        .zip(speeds.iter().zip(rates.iter().zip(&table.efficiencies)))
        .map(|(&kind, (&speed, (&rate, &eta)))| ScenarioAssessment {
            kind,
            label: kind.behaviour_label().to_string(),
            speed,
            rate,
            efficiency: eta,
        })
        .collect();

    Ok(EntropicReport {
        kappa: convention.kappa(),
        gamma_over_hbar: params.gamma_over_hbar,
        lambda,
        theta0: params.theta0,
        thetadot0: params.thetadot0,
        normalizer: table.normalizer,
        scenarios,
    })
}
