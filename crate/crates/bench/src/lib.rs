//! Benchmark-only crate; see `benches/pipeline.rs`.
//!
//! Shared fixtures for the benchmarks live here so the bench file stays
//! focused on measurement.

use entrogeo_core::{InitialConditions, ScenarioKind, ScenarioSpec};

/// The common working point used across the benchmarks: Γ/ħ = 1/2,
/// λ = 1/π (unit-success ratio).
pub fn working_spec(kind: ScenarioKind) -> ScenarioSpec {
    ScenarioSpec::natural(kind, 0.5, std::f64::consts::FRAC_1_PI)
        .expect("fixed benchmark parameters are valid")
}

/// Geodesic initial data shared by the benchmarks.
pub fn working_ic() -> InitialConditions {
    InitialConditions::new(1.0, 1.0, 0.0).expect("fixed benchmark parameters are valid")
}
