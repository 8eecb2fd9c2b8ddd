//! Information geometry of resonantly driven two-level systems.
//!
//! The crate follows one pipeline: a driving-field scenario
//! ([`scenario`]) fixes a transverse intensity envelope, whose
//! accumulated pulse area yields the closed-form transition probability
//! and a Schrödinger propagator to check it against ([`quantum`]). The
//! probability path carries a Fisher information and a statistical
//! metric ([`infogeo`]), whose geodesics have closed forms and a
//! Runge–Kutta integrator ([`geodesic`]); along those geodesics the
//! entropic speed, entropy-production rate, and efficiency of each
//! driving scheme are compared ([`entropic`]).
//!
//! Four envelope shapes are built in: constant, oscillatory (cos),
//! inverse-square power law, and exponential decay. All commonly used
//! types are re-exported at the crate root.

#![forbid(unsafe_code)]

pub mod constants;
pub mod entropic;
pub mod error;
pub mod geodesic;
pub mod infogeo;
pub mod numerics;
pub mod quantum;
pub mod scenario;

pub use constants::PhysicalConstants;
pub use entropic::{EfficiencyTable, EntropicReport, RegionSample, ReportParameters, ScenarioAssessment};
pub use error::{Error, Result};
pub use geodesic::{GeodesicSolution, InitialConditions, NumericPath};
pub use infogeo::{MetricConvention, PathFunctionals, ProbabilityPath, SampledPath};
pub use quantum::{
    Matrix2, PropagationResult, SourceOverlap, TwoLevelAmplitudes,
};
pub use scenario::{FieldComponents, MagneticField, ScenarioKind, ScenarioSpec};
