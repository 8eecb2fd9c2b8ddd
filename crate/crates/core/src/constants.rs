//! Unit-system presets and the constants derived from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fundamental constants fixing the unit system for field and probability
/// calculations.
///
/// Two presets cover the intended use: [`PhysicalConstants::natural`] sets
/// ħ = m = |e| = c = 1 and is the default everywhere, while
/// [`PhysicalConstants::mksa`] carries the CODATA 2018 exact values. The
/// Planck constant and the Bohr magneton are derived on demand, so the
/// identities h = 2πħ and μ_B = |e|ħ/(2mc) hold exactly by construction.
/// The magneton keeps the Gaussian-form factor of c because the
/// magnetic-field reconstruction in the scenario module is written as
/// B = -(2mc/|e|ħ)·ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant ħ.
    pub hbar: f64,
    /// Electron mass m.
    pub electron_mass: f64,
    /// Elementary charge magnitude |e|.
    pub elementary_charge: f64,
    /// Speed of light c.
    pub light_speed: f64,
}

impl PhysicalConstants {
    /// Natural units: ħ = m = |e| = c = 1.
    pub const fn natural() -> Self {
        Self {
            hbar: 1.0,
            electron_mass: 1.0,
            elementary_charge: 1.0,
            light_speed: 1.0,
        }
    }

    /// CODATA 2018 values in MKSA units.
    pub const fn mksa() -> Self {
        Self {
            hbar: 1.054_571_817e-34,
            electron_mass: 9.109_383_701_5e-31,
            elementary_charge: 1.602_176_634e-19,
            light_speed: 2.997_924_58e8,
        }
    }

    /// Validated constructor for custom unit systems; every constant must
    /// be finite and positive.
    pub fn new(
        hbar: f64,
        electron_mass: f64,
        elementary_charge: f64,
        light_speed: f64,
    ) -> Result<Self> {
        for (name, value) in [
            ("hbar", hbar),
            ("electron_mass", electron_mass),
            ("elementary_charge", elementary_charge),
            ("light_speed", light_speed),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    requirement: "must be finite and positive",
                });
            }
        }
        Ok(Self {
            hbar,
            electron_mass,
            elementary_charge,
            light_speed,
        })
    }

    /// Planck constant h = 2πħ.
    pub fn planck(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.hbar
    }

    /// Bohr magneton μ_B = |e|ħ/(2mc).
    pub fn bohr_magneton(&self) -> f64 {
        self.elementary_charge * self.hbar / (2.0 * self.electron_mass * self.light_speed)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::natural()
    }
}
