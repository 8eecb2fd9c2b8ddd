//! The four driving-field scenarios: transverse intensity envelopes,
//! resonance bookkeeping, and laboratory-frame magnetic fields.
//!
//! A two-level system driven by the su(2) Hamiltonian
//! H = ω_x σ_x + ω_y σ_y + Ω σ_z, with the transverse pair written as a
//! rotating field ω_x = ω_H cos φ_ω, ω_y = -ω_H sin φ_ω, stays on
//! resonance when the generalized Rabi condition φ̇_ω + (2/ħ)Ω = 0 holds.
//! The built-in profiles use the linear phase φ_ω(t) = ω₀ t + φ_ω(0)
//! with ω₀ < 0, set the longitudinal coefficient to Ω = -(ħ/2)ω₀, and
//! pick one of four transverse intensity envelopes:
//!
//! | kind        | ω_H(t)           |
//! |-------------|------------------|
//! | constant    | Γ                |
//! | oscillatory | Γ cos(λt)        |
//! | powerlaw    | Γ / (1 + λt)²    |
//! | exponential | Γ e^(-λt)        |
//!
//! The oscillatory envelope is a valid (non-negative) intensity only on
//! t ∈ [0, (π/2)/λ]; the checked operations enforce that window, while the
//! `_unchecked` variants evaluate the formula anywhere so integrators can
//! probe past it deliberately.

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// Which transverse intensity envelope drives the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Constant,
    Oscillatory,
    #[serde(rename = "powerlaw")]
    PowerLaw,
    Exponential,
}

impl ScenarioKind {
    /// All four kinds in canonical order.
    pub const ALL: [ScenarioKind; 4] = [
        ScenarioKind::Constant,
        ScenarioKind::Oscillatory,
        ScenarioKind::PowerLaw,
        ScenarioKind::Exponential,
    ];

    /// Stable lowercase name used in serialized output and on the
    /// command line.
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Constant => "constant",
            ScenarioKind::Oscillatory => "oscillatory",
            ScenarioKind::PowerLaw => "powerlaw",
            ScenarioKind::Exponential => "exponential",
        }
    }

    /// Qualitative search-behaviour class this driving reproduces:
    /// envelopes with a finite transverse phase budget pin the evolution
    /// to a fixed point, the others keep rotating through the target.
    pub fn behaviour_label(&self) -> &'static str {
        match self {
            ScenarioKind::Constant | ScenarioKind::Oscillatory => "Grover-like",
            ScenarioKind::PowerLaw | ScenarioKind::Exponential => "fixed-point-like",
        }
    }
}

impl std::fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Transverse and longitudinal Hamiltonian coefficients at one instant:
/// H = ω_x σ_x + ω_y σ_y + (longitudinal) σ_z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldComponents {
    pub omega_x: f64,
    pub omega_y: f64,
    pub longitudinal: f64,
}

/// Laboratory-frame magnetic field reconstructed from the Hamiltonian
/// coefficients of an electron-like moment: B = -(2mc/|e|ħ)·ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagneticField {
    pub b_x: f64,
    pub b_y: f64,
    pub b_z: f64,
    /// Transverse magnitude (2mc/|e|ħ)·ω_H.
    pub b_perp: f64,
    /// Longitudinal magnitude |b_z|.
    pub b_parallel: f64,
}

/// A fully specified driving scenario.
///
/// Constructed through [`ScenarioSpec::new`] (or the convenience helpers),
/// which validates Γ > 0, λ > 0 and ω₀ < 0. Fields are read through
/// accessors so the validated invariants cannot be broken afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    kind: ScenarioKind,
    gamma: f64,
    lambda: f64,
    omega0: f64,
    phase_origin: f64,
    longitudinal_override: Option<f64>,
    constants: PhysicalConstants,
}

impl ScenarioSpec {
    /// Validated constructor. `gamma` is the intensity scale Γ (an energy
    /// in the chosen units), `lambda` the envelope rate λ, `omega0` the
    /// rotation rate of the transverse phase (must be negative so the
    /// longitudinal coefficient Ω = -(ħ/2)ω₀ is positive).
    pub fn new(
        kind: ScenarioKind,
        gamma: f64,
        lambda: f64,
        omega0: f64,
        constants: PhysicalConstants,
    ) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
                requirement: "must be finite and positive",
            });
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                requirement: "must be finite and positive",
            });
        }
        if !(omega0.is_finite() && omega0 < 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega0",
                value: omega0,
                requirement: "must be finite and negative",
            });
        }
        Ok(Self {
            kind,
            gamma,
            lambda,
            omega0,
            phase_origin: 0.0,
            longitudinal_override: None,
            constants,
        })
    }

    /// Natural-units convenience constructor: ħ = 1, Γ = `gamma_over_hbar`
    /// and ω₀ = -1.
    pub fn natural(kind: ScenarioKind, gamma_over_hbar: f64, lambda: f64) -> Result<Self> {
        Self::new(
            kind,
            gamma_over_hbar,
            lambda,
            -1.0,
            PhysicalConstants::natural(),
        )
    }

    /// Scenario tuned to the unit-success working point Γ = (h/4)λ,
    /// equivalently Γ/(ħλ) = π/2, at which the failure probability of the
    /// decaying envelopes vanishes asymptotically.
    pub fn unit_success(
        kind: ScenarioKind,
        lambda: f64,
        omega0: f64,
        constants: PhysicalConstants,
    ) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                requirement: "must be finite and positive",
            });
        }
        Self::new(kind, constants.planck() / 4.0 * lambda, lambda, omega0, constants)
    }

    /// Replace the transverse phase at t = 0 (default 0).
    pub fn with_phase_origin(mut self, phase_origin: f64) -> Self {
        self.phase_origin = phase_origin;
        self
    }

    /// Force the longitudinal coefficient to `omega_z` instead of the
    /// resonant value -(ħ/2)ω₀, detuning the drive.
    pub fn with_longitudinal_override(mut self, omega_z: f64) -> Self {
        self.longitudinal_override = Some(omega_z);
        self
    }

    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn phase_origin(&self) -> f64 {
        self.phase_origin
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    /// Γ/ħ, the intensity scale as a rate.
    pub fn gamma_over_hbar(&self) -> f64 {
        self.gamma / self.constants.hbar
    }

    /// The dimensionless working-point ratio Γ/(ħλ).
    pub fn gamma_over_hbar_lambda(&self) -> f64 {
        self.gamma / (self.constants.hbar * self.lambda)
    }

    /// Whether the spec sits at the unit-success working point
    /// Γ/(ħλ) = π/2 (to a relative 1e-12).
    pub fn is_unit_success(&self) -> bool {
        let target = std::f64::consts::FRAC_PI_2;
        (self.gamma_over_hbar_lambda() - target).abs() <= 1e-12 * target
    }

    /// Upper end of the time window on which the envelope is a valid
    /// intensity: (π/2)/λ for the oscillatory kind, +∞ otherwise.
    pub fn intensity_window_end(&self) -> f64 {
        match self.kind {
            ScenarioKind::Oscillatory => std::f64::consts::FRAC_PI_2 / self.lambda,
            _ => f64::INFINITY,
        }
    }

    fn check_time(&self, t: f64) -> Result<()> {
        let hi = self.intensity_window_end();
        if !(t >= 0.0) || t > hi {
            return Err(Error::OutsideDomain {
                what: "time",
                value: t,
                lo: 0.0,
                hi,
            });
        }
        Ok(())
    }

    /// Envelope formula evaluated without any domain check; negative past
    /// the oscillatory window. Exists so propagators can sample midpoints
    /// wherever their step lands.
    pub fn transverse_intensity_unchecked(&self, t: f64) -> f64 {
        match self.kind {
            ScenarioKind::Constant => self.gamma,
            ScenarioKind::Oscillatory => self.gamma * (self.lambda * t).cos(),
            ScenarioKind::PowerLaw => {
                let s = 1.0 + self.lambda * t;
                self.gamma / (s * s)
            }
            ScenarioKind::Exponential => self.gamma * (-self.lambda * t).exp(),
        }
    }

    /// Transverse intensity ω_H(t); errors outside the validity window.
    pub fn transverse_intensity(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(self.transverse_intensity_unchecked(t))
    }

    /// Transverse phase φ_ω(t) = ω₀ t + φ_ω(0).
    pub fn phase(&self, t: f64) -> f64 {
        self.omega0 * t + self.phase_origin
    }

    /// Longitudinal coefficient Ω: the resonant value -(ħ/2)ω₀ unless
    /// overridden.
    pub fn longitudinal(&self) -> f64 {
        self.longitudinal_override
            .unwrap_or(-0.5 * self.constants.hbar * self.omega0)
    }

    /// Residual of the generalized Rabi condition, φ̇_ω + (2/ħ)Ω. Zero by
    /// construction for the built-in profiles; nonzero when the
    /// longitudinal coefficient has been overridden. The time argument is
    /// kept for profiles whose phase rate varies.
    pub fn rabi_condition_residual(&self, _t: f64) -> f64 {
        self.omega0 + 2.0 / self.constants.hbar * self.longitudinal()
    }

    /// Hamiltonian coefficients without the window check.
    pub fn field_components_unchecked(&self, t: f64) -> FieldComponents {
        let intensity = self.transverse_intensity_unchecked(t);
        let phi = self.phase(t);
        FieldComponents {
            omega_x: intensity * phi.cos(),
            omega_y: -intensity * phi.sin(),
            longitudinal: self.longitudinal(),
        }
    }

    /// Hamiltonian coefficients at time `t`.
    pub fn field_components(&self, t: f64) -> Result<FieldComponents> {
        self.check_time(t)?;
        Ok(self.field_components_unchecked(t))
    }

    /// Laboratory magnetic field for an electron-like moment,
    /// B = -(2mc/|e|ħ)·(ω_x, ω_y, Ω).
    pub fn magnetic_field(&self, t: f64) -> Result<MagneticField> {
        let fc = self.field_components(t)?;
        let c = &self.constants;
        let scale = 2.0 * c.electron_mass * c.light_speed / (c.elementary_charge * c.hbar);
        Ok(MagneticField {
            b_x: -scale * fc.omega_x,
            b_y: -scale * fc.omega_y,
            b_z: -scale * fc.longitudinal,
            b_perp: scale * self.transverse_intensity_unchecked(t).abs(),
            b_parallel: (scale * fc.longitudinal).abs(),
        })
    }
}

/// Envelope rate reproducing a given intensity scale at the unit-success
/// working point: λ = 4Γ/h.
pub fn lambda_of_gamma(gamma: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            requirement: "must be finite and positive",
        });
    }
    Ok(4.0 * gamma / constants.planck())
}

/// Inverse of [`lambda_of_gamma`]: Γ = (h/4)λ.
pub fn gamma_of_lambda(lambda: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            requirement: "must be finite and positive",
        });
    }
    Ok(constants.planck() / 4.0 * lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    fn natural(kind: ScenarioKind, gamma: f64, lambda: f64) -> ScenarioSpec {
        ScenarioSpec::natural(kind, gamma, lambda).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_parameters() {
        let c = PhysicalConstants::natural();
        assert!(ScenarioSpec::new(ScenarioKind::Constant, 0.0, 1.0, -1.0, c).is_err());
        assert!(ScenarioSpec::new(ScenarioKind::Constant, -1.0, 1.0, -1.0, c).is_err());
        assert!(ScenarioSpec::new(ScenarioKind::Constant, 1.0, 0.0, -1.0, c).is_err());
        assert!(ScenarioSpec::new(ScenarioKind::Constant, 1.0, f64::NAN, -1.0, c).is_err());
        assert!(ScenarioSpec::new(ScenarioKind::Constant, 1.0, 1.0, 0.0, c).is_err());
        assert!(ScenarioSpec::new(ScenarioKind::Constant, 1.0, 1.0, 1.0, c).is_err());
        assert!(ScenarioSpec::new(ScenarioKind::Constant, 1.0, 1.0, -1.0, c).is_ok());
    }

    #[test]
    fn constant_envelope_ignores_time() {
        let s = natural(ScenarioKind::Constant, 1.0, 1.0);
        assert!((s.transverse_intensity(7.0).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn exponential_envelope_matches_formula() {
        let s = natural(ScenarioKind::Exponential, 1.0, 1.0);
        assert!((s.transverse_intensity(1.0).unwrap() - (-1.0f64).exp()).abs() < TOL);
    }

    #[test]
    fn powerlaw_envelope_matches_formula() {
        let s = natural(ScenarioKind::PowerLaw, 2.0, 0.5);
        assert!((s.transverse_intensity(2.0).unwrap() - 0.5).abs() < TOL);
    }

    #[test]
    fn oscillatory_window_is_enforced() {
        let s = natural(ScenarioKind::Oscillatory, 1.0, 2.0);
        let window = std::f64::consts::FRAC_PI_2 / 2.0;
        assert!(s.transverse_intensity(window).unwrap().abs() < 1e-15);
        let err = s.transverse_intensity(window + 1e-6).unwrap_err();
        assert!(matches!(err, Error::OutsideDomain { .. }));
        // The unchecked variant keeps evaluating the formula.
        assert!(s.transverse_intensity_unchecked(window + 0.5) < 0.0);
    }

    #[test]
    fn negative_time_is_rejected_for_all_kinds() {
        for kind in ScenarioKind::ALL {
            let s = natural(kind, 1.0, 1.0);
            assert!(s.transverse_intensity(-0.1).is_err());
            assert!(s.field_components(-0.1).is_err());
        }
    }

    #[test]
    fn field_components_at_origin() {
        let s = natural(ScenarioKind::Constant, 1.0, 1.0);
        let fc = s.field_components(0.0).unwrap();
        assert!((fc.omega_x - 1.0).abs() < TOL);
        assert!(fc.omega_y.abs() < TOL);
        assert!((fc.longitudinal - 0.5).abs() < TOL);
    }

    #[test]
    fn field_components_after_half_turn() {
        let c = PhysicalConstants::natural();
        let s = ScenarioSpec::new(
            ScenarioKind::Constant,
            1.0,
            1.0,
            -std::f64::consts::PI,
            c,
        )
        .unwrap();
        let fc = s.field_components(1.0).unwrap();
        assert!((fc.omega_x + 1.0).abs() < TOL);
        assert!(fc.omega_y.abs() < TOL);
        assert!((fc.longitudinal - std::f64::consts::FRAC_PI_2).abs() < TOL);
    }

    #[test]
    fn rabi_residual_is_zero_for_builtin_profiles() {
        for kind in ScenarioKind::ALL {
            let s = natural(kind, 0.7, 0.3);
            for t in [0.0, 0.4, 1.9] {
                assert!(s.rabi_condition_residual(t).abs() < TOL);
            }
        }
    }

    #[test]
    fn rabi_residual_detects_longitudinal_override() {
        // Ω forced to -ħω₀/4, half the resonant value: residual ω₀/2.
        let omega0 = -2.0;
        let c = PhysicalConstants::natural();
        let s = ScenarioSpec::new(ScenarioKind::Constant, 1.0, 1.0, omega0, c)
            .unwrap()
            .with_longitudinal_override(-c.hbar * omega0 / 4.0);
        assert!((s.rabi_condition_residual(0.0) - omega0 / 2.0).abs() < TOL);
    }

    #[test]
    fn phase_origin_shifts_phase_linearly() {
        let s = natural(ScenarioKind::Constant, 1.0, 1.0).with_phase_origin(0.75);
        assert!((s.phase(0.0) - 0.75).abs() < TOL);
        assert!((s.phase(2.0) - (0.75 - 2.0)).abs() < TOL);
    }

    #[test]
    fn magnetic_field_transverse_magnitude_consistent() {
        // Decaying-spiral configuration: fast rotation over a decaying
        // exponential envelope with Γ equal to the magneton.
        let c = PhysicalConstants::natural();
        let s = ScenarioSpec::new(
            ScenarioKind::Exponential,
            c.bohr_magneton(),
            1.0,
            -10.0 * std::f64::consts::PI,
            c,
        )
        .unwrap();
        let mut radii = Vec::new();
        let mut winding = 0.0;
        let mut prev_angle: Option<f64> = None;
        for k in 0..=400 {
            let t = k as f64 / 400.0;
            let b = s.magnetic_field(t).unwrap();
            assert!(((b.b_x * b.b_x + b.b_y * b.b_y).sqrt() - b.b_perp).abs() < 1e-12);
            assert!((b.b_parallel - b.b_z.abs()).abs() < TOL);
            radii.push(b.b_perp);
            let angle = b.b_y.atan2(b.b_x);
            if let Some(prev) = prev_angle {
                let mut d = angle - prev;
                while d > std::f64::consts::PI {
                    d -= 2.0 * std::f64::consts::PI;
                }
                while d < -std::f64::consts::PI {
                    d += 2.0 * std::f64::consts::PI;
                }
                winding += d;
            }
            prev_angle = Some(angle);
        }
        // Radius decays monotonically while the transverse field winds
        // through |ω₀| radians: a shrinking spiral.
        assert!(radii.windows(2).all(|w| w[1] < w[0]));
        assert!((winding.abs() - 10.0 * std::f64::consts::PI).abs() < 1e-6);
    }

    #[test]
    fn natural_unit_field_scale_is_two() {
        let s = natural(ScenarioKind::Constant, 1.5, 1.0);
        let b = s.magnetic_field(0.0).unwrap();
        // scale = 2mc/(|e|ħ) = 2 in natural units, and B opposes ω.
        assert!((b.b_x + 2.0 * 1.5).abs() < TOL);
        assert!((b.b_perp - 2.0 * 1.5).abs() < TOL);
        assert!((b.b_z + 2.0 * s.longitudinal()).abs() < TOL);
    }

    #[test]
    fn mksa_chain_reproduces_fast_decay_rate() {
        // A 0.2 T transverse scale at t = 0 pins Γ = μ_B · 0.2, and the
        // unit-success coupling λ = 4Γ/h then lands near 37 s⁻¹.
        let c = PhysicalConstants::mksa();
        let gamma = c.bohr_magneton() * 0.2;
        let lambda = lambda_of_gamma(gamma, &c).unwrap();
        assert!((lambda - 37.349_158_226_432_823).abs() < 1e-9);
        assert!((lambda - 37.0).abs() < 0.5);
        // Round trip back to the field scale.
        let s = ScenarioSpec::new(ScenarioKind::Exponential, gamma, lambda, -1.0, c).unwrap();
        assert!((s.magnetic_field(0.0).unwrap().b_perp - 0.2).abs() < 1e-12);
    }

    #[test]
    fn unit_success_working_point() {
        let c = PhysicalConstants::natural();
        let s = ScenarioSpec::unit_success(ScenarioKind::Exponential, 0.37, -1.0, c).unwrap();
        assert!(
            (s.gamma_over_hbar_lambda() - std::f64::consts::FRAC_PI_2).abs()
                < TOL * std::f64::consts::FRAC_PI_2
        );
        assert!(s.is_unit_success());
        let off = natural(ScenarioKind::Exponential, 0.5, 1.0);
        assert!(!off.is_unit_success());
    }

    #[test]
    fn gamma_at_quarter_planck_gives_unit_rate() {
        let c = PhysicalConstants::natural();
        assert!((lambda_of_gamma(c.planck() / 4.0, &c).unwrap() - 1.0).abs() < TOL);
        assert!((gamma_of_lambda(1.0, &c).unwrap() - c.planck() / 4.0).abs() < TOL);
    }

    #[test]
    fn kind_serialization_uses_lowercase_names() {
        for kind in ScenarioKind::ALL {
            let json = serde_json::to_string(&kind).unwrap();
            assert_eq!(json, format!("\"{}\"", kind.name()));
            let back: ScenarioKind = serde_json::from_str(&json).unwrap();
            assert_eq!(back, kind);
        }
    }

    #[test]
    fn behaviour_labels() {
        assert_eq!(ScenarioKind::Constant.behaviour_label(), "Grover-like");
        assert_eq!(ScenarioKind::Oscillatory.behaviour_label(), "Grover-like");
        assert_eq!(ScenarioKind::PowerLaw.behaviour_label(), "fixed-point-like");
        assert_eq!(
            ScenarioKind::Exponential.behaviour_label(),
            "fixed-point-like"
        );
    }

    proptest! {
        #[test]
        fn transverse_components_recover_intensity(
            kind_idx in 0usize..4,
            gamma in 0.1f64..5.0,
            lambda in 0.1f64..3.0,
            omega0 in -8.0f64..-0.1,
            phase0 in -3.0f64..3.0,
            t in 0.0f64..0.4,
        ) {
            let kind = ScenarioKind::ALL[kind_idx];
            let s = ScenarioSpec::new(kind, gamma, lambda, omega0, PhysicalConstants::natural())
                .unwrap()
                .with_phase_origin(phase0);
            // t capped at 0.4 <= (pi/2)/3.0 keeps every kind inside its window.
            let fc = s.field_components(t).unwrap();
            let intensity = s.transverse_intensity(t).unwrap();
            let recovered = (fc.omega_x * fc.omega_x + fc.omega_y * fc.omega_y).sqrt();
            prop_assert!((recovered - intensity.abs()).abs() <= 1e-12 * intensity.abs().max(1.0));
        }

        #[test]
        fn rate_conversions_round_trip(lambda in 1e-6f64..1e6) {
            let c = PhysicalConstants::natural();
            let gamma = gamma_of_lambda(lambda, &c).unwrap();
            let back = lambda_of_gamma(gamma, &c).unwrap();
            prop_assert!((back - lambda).abs() <= 1e-15 * lambda);
        }
    }
}
