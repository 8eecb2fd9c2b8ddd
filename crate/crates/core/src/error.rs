//! Error types shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure conditions reported by the library.
///
/// Construction-time problems (`InvalidParameter`) are kept distinct from
/// evaluation-time domain problems (`OutsideDomain`, `SingularApproach`,
/// `ProbabilityEndpoint`) so callers can triage them differently — the
/// command-line front end, for example, maps the former to configuration
/// errors and the latter to domain errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor argument failed validation.
    #[error("parameter `{name}` = {value}: {requirement}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// An evaluation point lies outside the domain of the quantity asked for.
    #[error("{what} = {value} outside domain [{lo}, {hi}]")]
    OutsideDomain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// A sample grid is malformed (too short, not strictly increasing, or
    /// mismatched with its companion arrays).
    #[error("grid error: {0}")]
    Grid(&'static str),

    /// An operation that needs at least one element received none.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// A propagator drifted away from unitarity beyond what the step
    /// scheme can justify.
    #[error("unitarity deviation {deviation:.3e} exceeds tolerance {tolerance:.3e}")]
    NonUnitary { deviation: f64, tolerance: f64 },

    /// A trajectory ran into a singular point (metric degeneracy or the
    /// edge of a closed form's validity interval).
    #[error("singular point approached; last valid affine parameter {last_valid_xi}")]
    SingularApproach { last_valid_xi: f64 },

    /// Finite differences were requested at a point where the probability
    /// product p(1-p) is too small for them to mean anything.
    #[error("probability endpoint at theta = {theta}: p_w * p_perp = {p_product:.3e} is too small for finite differences")]
    ProbabilityEndpoint { theta: f64, p_product: f64 },

    /// Adaptive quadrature hit its interval cap before two successive
    /// refinements agreed.
    #[error("quadrature did not stabilise below the interval cap (last estimate {estimate}, last change {change:.3e})")]
    QuadratureStalled { estimate: f64, change: f64 },

    /// An integrand returned NaN or infinity.
    #[error("integrand produced a non-finite value near {at}")]
    NonFiniteIntegrand { at: f64 },

    /// Root bracketing failed: no sign change over the given interval.
    #[error("no sign change on [{lo}, {hi}]: root not bracketed")]
    NotBracketed { lo: f64, hi: f64 },
}
