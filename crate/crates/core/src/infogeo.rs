//! Fisher information and the statistical metric on probability paths.
//!
//! The two-outcome distribution (p_w(θ), p_⊥(θ)) traced by a driving
//! scenario carries the Fisher information
//! F(θ) = ṗ_w²/(p_w·p_⊥) = 4·u̇(θ)², with u the accumulated pulse area.
//! The statistical metric used for path lengths and divergences is
//! g = κ²F with a convention constant κ. Both the closed form of F and
//! two numerical routes to it (finite differences on a sampled path, and
//! the score-variance form) live here, together with the path functionals
//!
//!   L = ∫ κ √F(θ) |θ̇| dξ      (statistical length)
//!   I = τ ∫ κ² F(θ) θ̇² dξ     (action / divergence, τ the duration)
//!
//! which obey the Cauchy–Schwarz bound I ≥ L².

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{grid_derivative, simpson_adaptive, simpson_samples};
use crate::quantum::{analytic_failure_probability, analytic_success_probability};
use crate::scenario::{ScenarioKind, ScenarioSpec};

/// Probability products below this are treated as probability endpoints,
/// where the finite-difference Fisher estimate degenerates and the
/// analytic limit 4·u̇² is returned instead.
pub const ENDPOINT_PRODUCT_TOL: f64 = 1e-12;

/// Convention constant κ relating the Fisher information to the
/// statistical metric g = κ²F.
///
/// `KappaHalf` (κ = 1/2, the default) normalizes the metric so that the
/// entropic speeds of the driving scenarios come out on the scale used
/// throughout the reporting layer; `KappaOne` keeps g = F.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MetricConvention {
    #[default]
    KappaHalf,
    KappaOne,
}

impl MetricConvention {
    pub fn kappa(&self) -> f64 {
        match self {
            MetricConvention::KappaHalf => 0.5,
            MetricConvention::KappaOne => 1.0,
        }
    }

    /// Build from a literal κ value; only 1/2 and 1 are meaningful.
    pub fn from_kappa(kappa: f64) -> Result<Self> {
        if kappa == 0.5 {
            Ok(MetricConvention::KappaHalf)
        } else if kappa == 1.0 {
            Ok(MetricConvention::KappaOne)
        } else {
            Err(Error::InvalidParameter {
                name: "kappa",
                value: kappa,
                requirement: "must be exactly 0.5 or 1.0",
            })
        }
    }
}

/// A sampled two-outcome probability path (p_w, p_⊥) over a θ grid.
///
/// The failure branch is stored explicitly rather than recomputed as
/// 1 - p_w, so both branches keep full relative accuracy near their own
/// zeros — which is exactly where the Fisher denominator p_w·p_⊥ needs it.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityPath {
    theta: Vec<f64>,
    p_success: Vec<f64>,
    p_failure: Vec<f64>,
}

impl ProbabilityPath {
    /// Validated constructor from raw samples.
    pub fn new(theta: Vec<f64>, p_success: Vec<f64>, p_failure: Vec<f64>) -> Result<Self> {
        if theta.len() != p_success.len() || theta.len() != p_failure.len() {
            return Err(Error::Grid("abscissa and ordinate lengths differ"));
        }
        if theta.len() < 3 {
            return Err(Error::Grid("need at least three nodes"));
        }
        if theta.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Grid("abscissae must be strictly increasing"));
        }
        if !(theta[0] >= 0.0) {
            return Err(Error::Grid("theta grid must start at or above zero"));
        }
        for (&p, &q) in p_success.iter().zip(&p_failure) {
            if !((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q)) {
                return Err(Error::Grid("probabilities must lie in [0, 1]"));
            }
            if (p + q - 1.0).abs() > 1e-12 {
                return Err(Error::Grid("branches must sum to 1 within 1e-12"));
            }
        }
        Ok(Self {
            theta,
            p_success,
            p_failure,
        })
    }

    /// Sample the closed-form probabilities of a scenario over `theta`.
    pub fn sample(spec: &ScenarioSpec, theta: &[f64]) -> Result<Self> {
        let mut p_success = Vec::with_capacity(theta.len());
        let mut p_failure = Vec::with_capacity(theta.len());
        for &t in theta {
            p_success.push(analytic_success_probability(spec, t)?);
            p_failure.push(analytic_failure_probability(spec, t)?);
        }
        Self::new(theta.to_vec(), p_success, p_failure)
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn p_success(&self) -> &[f64] {
        &self.p_success
    }

    pub fn p_failure(&self) -> &[f64] {
        &self.p_failure
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// Index of the grid node nearest to `theta`.
    pub fn nearest_node(&self, theta: f64) -> Result<usize> {
        if !theta.is_finite() {
            return Err(Error::OutsideDomain {
                what: "theta",
                value: theta,
                lo: self.theta[0],
                hi: *self.theta.last().unwrap(),
            });
        }
        let idx = self
            .theta
            .partition_point(|&t| t < theta)
            .min(self.theta.len() - 1);
        let better_below =
            idx > 0 && (theta - self.theta[idx - 1]).abs() <= (self.theta[idx] - theta).abs();
        Ok(if better_below { idx - 1 } else { idx })
    }
}

/// Closed-form Fisher information of the scenario's probability path,
/// F(θ) = 4(Γ/ħ)² × {1, cos²(λθ), (1+λθ)⁻⁴, e^(-2λθ)}.
pub fn fisher_analytic(spec: &ScenarioSpec, theta: f64) -> Result<f64> {
    if !(theta >= 0.0) {
        return Err(Error::OutsideDomain {
            what: "theta",
            value: theta,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok(fisher_profile(spec, theta))
}

fn fisher_profile(spec: &ScenarioSpec, theta: f64) -> f64 {
    let g = spec.gamma_over_hbar();
    let l = spec.lambda();
    let base = 4.0 * g * g;
    match spec.kind() {
        ScenarioKind::Constant => base,
        ScenarioKind::Oscillatory => {
            let c = (l * theta).cos();
            base * c * c
        }
        ScenarioKind::PowerLaw => {
            let s = 1.0 + l * theta;
            base / (s * s * s * s)
        }
        ScenarioKind::Exponential => base * (-2.0 * l * theta).exp(),
    }
}

/// Fisher information estimated from a sampled probability path by
/// central finite differences at the grid node nearest to `theta`:
/// F = ṗ_w²/(p_w·p_⊥).
///
/// At probability endpoints (p_w·p_⊥ below [`ENDPOINT_PRODUCT_TOL`]) the
/// ratio degenerates to 0/0; there the analytic limit 4·u̇² obtained from
/// the scenario's envelope is returned instead. Boundary nodes away from
/// probability endpoints are rejected, since one-sided differences would
/// silently degrade the estimate.
pub fn fisher_numeric(spec: &ScenarioSpec, path: &ProbabilityPath, theta: f64) -> Result<f64> {
    let i = path.nearest_node(theta)?;
    let t = path.theta()[i];
    let product = path.p_success()[i] * path.p_failure()[i];
    if product < ENDPOINT_PRODUCT_TOL {
        let udot = spec.transverse_intensity_unchecked(t) / spec.constants().hbar;
        return Ok(4.0 * udot * udot);
    }
    if i == 0 || i + 1 == path.len() {
        return Err(Error::Grid(
            "Fisher estimate needs an interior node; extend the path grid",
        ));
    }
    let h1 = t - path.theta()[i - 1];
    let h2 = path.theta()[i + 1] - t;
    let y0 = path.p_success()[i - 1];
    let y1 = path.p_success()[i];
    let y2 = path.p_success()[i + 1];
    let pdot = (h1 * h1 * y2 - h2 * h2 * y0 + (h2 * h2 - h1 * h1) * y1) / (h1 * h2 * (h1 + h2));
    Ok(pdot * pdot / product)
}

/// Fisher information as the variance of the score: Σ_x p_x (ṗ_x/p_x)²,
/// summed over the two outcomes, with both branch derivatives estimated
/// independently from the sampled path. A second numerical route used to
/// cross-check [`fisher_numeric`].
pub fn fisher_score_variance(path: &ProbabilityPath, theta: f64) -> Result<f64> {
    let i = path.nearest_node(theta)?;
    if i == 0 || i + 1 == path.len() {
        return Err(Error::Grid(
            "Fisher estimate needs an interior node; extend the path grid",
        ));
    }
    let t = path.theta()[i];
    let p = path.p_success()[i];
    let q = path.p_failure()[i];
    if p * q < ENDPOINT_PRODUCT_TOL {
        return Err(Error::ProbabilityEndpoint {
            theta: t,
            p_product: p * q,
        });
    }
    let slope = |y: &[f64]| {
        let h1 = t - path.theta()[i - 1];
        let h2 = path.theta()[i + 1] - t;
        (h1 * h1 * y[i + 1] - h2 * h2 * y[i - 1] + (h2 * h2 - h1 * h1) * y[i])
            / (h1 * h2 * (h1 + h2))
    };
    let pdot = slope(path.p_success());
    let qdot = slope(path.p_failure());
    Ok(pdot * pdot / p + qdot * qdot / q)
}

/// Statistical metric g(θ) = κ²·F(θ).
pub fn metric(spec: &ScenarioSpec, convention: MetricConvention, theta: f64) -> Result<f64> {
    let kappa = convention.kappa();
    Ok(kappa * kappa * fisher_analytic(spec, theta)?)
}

/// Statistical length and action of a path segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathFunctionals {
    /// L = ∫ κ√F |θ̇| dξ.
    pub length: f64,
    /// I = τ ∫ κ²F θ̇² dξ.
    pub divergence: f64,
    /// Segment duration τ = b - a.
    pub tau: f64,
}

/// A curve θ(ξ) sampled over an affine-parameter grid, optionally with
/// exact derivative samples. When `theta_dot` is absent the derivative is
/// reconstructed by second-order finite differences, which limits
/// downstream functionals to roughly 1e-7 accuracy; exact samples keep
/// the quadrature at full precision.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    xi: Vec<f64>,
    theta: Vec<f64>,
    theta_dot: Option<Vec<f64>>,
}

impl SampledPath {
    pub fn new(xi: Vec<f64>, theta: Vec<f64>, theta_dot: Option<Vec<f64>>) -> Result<Self> {
        if xi.len() != theta.len() {
            return Err(Error::Grid("abscissa and ordinate lengths differ"));
        }
        if let Some(d) = &theta_dot {
            if d.len() != xi.len() {
                return Err(Error::Grid("derivative sample length differs"));
            }
        }
        if xi.len() < 3 {
            return Err(Error::Grid("need at least three nodes"));
        }
        if xi.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Grid("abscissae must be strictly increasing"));
        }
        Ok(Self {
            xi,
            theta,
            theta_dot,
        })
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn theta_dot(&self) -> Option<&[f64]> {
        self.theta_dot.as_deref()
    }

    fn derivative_samples(&self) -> Result<Vec<f64>> {
        match &self.theta_dot {
            Some(d) => Ok(d.clone()),
            None => grid_derivative(&self.xi, &self.theta),
        }
    }
}

/// Length and action of a sampled path on a scenario's statistical
/// manifold, by Simpson quadrature over the sample grid.
pub fn path_functionals(
    spec: &ScenarioSpec,
    convention: MetricConvention,
    path: &SampledPath,
) -> Result<PathFunctionals> {
    let kappa = convention.kappa();
    let dots = path.derivative_samples()?;
    let mut speed = Vec::with_capacity(path.xi.len());
    let mut energy = Vec::with_capacity(path.xi.len());
    for (&theta, &dot) in path.theta.iter().zip(&dots) {
        let f = fisher_analytic(spec, theta)?;
        speed.push(kappa * f.sqrt() * dot.abs());
        energy.push(kappa * kappa * f * dot * dot);
    }
    let tau = path.xi.last().unwrap() - path.xi[0];
    Ok(PathFunctionals {
        length: simpson_samples(&path.xi, &speed)?,
        divergence: tau * simpson_samples(&path.xi, &energy)?,
        tau,
    })
}

/// Length and action of a curve given in functional form, by adaptive
/// quadrature to the library-wide 1e-10 relative target. `theta` and
/// `theta_dot` must be the curve and its exact ξ-derivative on [a, b].
pub fn path_functionals_fn(
    spec: &ScenarioSpec,
    convention: MetricConvention,
    theta: &dyn Fn(f64) -> f64,
    theta_dot: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
) -> Result<PathFunctionals> {
    if !(b > a) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: b - a,
            requirement: "segment must have positive duration",
        });
    }
    let kappa = convention.kappa();
    let speed = |xi: f64| {
        let f = fisher_profile_or_nan(spec, theta(xi));
        kappa * f.sqrt() * theta_dot(xi).abs()
    };
    let energy = |xi: f64| {
        let f = fisher_profile_or_nan(spec, theta(xi));
        let d = theta_dot(xi);
        kappa * kappa * f * d * d
    };
    let length = simpson_adaptive(speed, a, b)?;
    let divergence = (b - a) * simpson_adaptive(energy, a, b)?;
    Ok(PathFunctionals {
        length,
        divergence,
        tau: b - a,
    })
}

/// Fisher profile that poisons out-of-domain θ with NaN so the adaptive
/// quadrature reports a clean non-finite-integrand error instead of
/// silently integrating a formula outside its meaning.
fn fisher_profile_or_nan(spec: &ScenarioSpec, theta: f64) -> f64 {
    if theta >= 0.0 {
        fisher_profile(spec, theta)
    } else {
        f64::NAN
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::linspace;
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    fn working_spec(kind: ScenarioKind) -> ScenarioSpec {
        ScenarioSpec::natural(kind, 0.5, std::f64::consts::FRAC_1_PI).unwrap()
    }

    fn fine_path(spec: &ScenarioSpec, lo: f64, hi: f64, spacing: f64) -> ProbabilityPath {
        let count = ((hi - lo) / spacing).round() as usize + 1;
        let grid = linspace(lo, hi, count).unwrap();
        ProbabilityPath::sample(spec, &grid).unwrap()
    }

    #[test]
    fn fisher_closed_forms_at_reference_points() {
        let s = ScenarioSpec::natural(ScenarioKind::Constant, 0.5, 1.0).unwrap();
        assert!((fisher_analytic(&s, 3.3).unwrap() - 1.0).abs() < TOL);

        let s = working_spec(ScenarioKind::Oscillatory);
        // cos²(1/π) evaluated independently at 30 digits.
        let expected = 0.902_054_914_114_395_855;
        assert!((fisher_analytic(&s, 1.0).unwrap() - expected).abs() < 1e-15);

        let s = working_spec(ScenarioKind::Exponential);
        assert!(fisher_analytic(&s, 1e6).unwrap() < 1e-200);

        let s = ScenarioSpec::natural(ScenarioKind::PowerLaw, 1.0, 1.0).unwrap();
        assert!((fisher_analytic(&s, 1.0).unwrap() - 4.0 / 16.0).abs() < TOL);
    }

    #[test]
    fn fisher_rejects_negative_theta() {
        let s = working_spec(ScenarioKind::Constant);
        assert!(fisher_analytic(&s, -0.5).is_err());
    }

    #[test]
    fn fisher_equals_four_pulse_rate_squared() {
        // F = 4 u̇² with u̇ = ω_H/ħ, checked against the envelope route.
        for kind in ScenarioKind::ALL {
            let s = working_spec(kind);
            for theta in [0.0, 0.3, 1.0, 2.7, 4.9] {
                let f = fisher_analytic(&s, theta).unwrap();
                let udot = s.transverse_intensity_unchecked(theta) / s.constants().hbar;
                let other = 4.0 * udot * udot;
                assert!(
                    (f - other).abs() <= 1e-12 * other.abs().max(1e-300),
                    "{kind} at {theta}: {f} vs {other}"
                );
            }
        }
    }

    #[test]
    fn fisher_numeric_recovers_closed_form_on_fine_grid() {
        for kind in ScenarioKind::ALL {
            let s = working_spec(kind);
            let path = fine_path(&s, 0.0, 1.0, 1e-4);
            for theta in [0.2, 0.35, 0.61, 0.9] {
                let got = fisher_numeric(&s, &path, theta).unwrap();
                let want = fisher_analytic(&s, theta).unwrap();
                assert!(
                    (got - want).abs() < 1e-6 * want.abs().max(1e-6),
                    "{kind} at {theta}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn fisher_numeric_falls_back_to_analytic_limit_at_endpoints() {
        let s = working_spec(ScenarioKind::Constant);
        let path = fine_path(&s, 0.0, 1.0, 1e-4);
        // theta = 0 is both a grid boundary and a probability endpoint
        // (p_w = 0); the analytic limit wins.
        let got = fisher_numeric(&s, &path, 0.0).unwrap();
        assert!((got - 1.0).abs() < TOL);
    }

    #[test]
    fn fisher_numeric_rejects_plain_boundary_nodes() {
        let s = working_spec(ScenarioKind::Constant);
        let path = fine_path(&s, 0.5, 1.0, 1e-4);
        let err = fisher_numeric(&s, &path, 0.5).unwrap_err();
        assert!(matches!(err, Error::Grid(_)));
    }

    #[test]
    fn fisher_numeric_handles_symmetric_point() {
        // p_w = p_⊥ = 1/2 at u = π/4, i.e. θ = π/2 for Γ/ħ = 1/2.
        let s = ScenarioSpec::natural(ScenarioKind::Constant, 0.5, 1.0).unwrap();
        let theta_star = std::f64::consts::FRAC_PI_2;
        let path = fine_path(&s, theta_star - 0.05, theta_star + 0.05, 1e-4);
        let i = path.nearest_node(theta_star).unwrap();
        assert!((path.p_success()[i] - 0.5).abs() < 1e-4);
        let got = fisher_numeric(&s, &path, theta_star).unwrap();
        assert!((got - 1.0).abs() < 1e-6);
    }

    #[test]
    fn score_variance_agrees_with_ratio_form() {
        for kind in ScenarioKind::ALL {
            let s = working_spec(kind);
            let path = fine_path(&s, 0.0, 1.2, 1e-4);
            for theta in [0.21, 0.55, 0.93] {
                let a = fisher_numeric(&s, &path, theta).unwrap();
                let b = fisher_score_variance(&path, theta).unwrap();
                assert!(
                    (a - b).abs() < 1e-10 * a.abs().max(1.0),
                    "{kind} at {theta}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn metric_is_kappa_squared_times_fisher() {
        let s = ScenarioSpec::natural(ScenarioKind::Constant, 0.5, 1.0).unwrap();
        assert!((metric(&s, MetricConvention::KappaHalf, 1.0).unwrap() - 0.25).abs() < TOL);
        assert!((metric(&s, MetricConvention::KappaOne, 1.0).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn convention_from_kappa() {
        assert_eq!(
            MetricConvention::from_kappa(0.5).unwrap(),
            MetricConvention::KappaHalf
        );
        assert_eq!(
            MetricConvention::from_kappa(1.0).unwrap(),
            MetricConvention::KappaOne
        );
        assert!(MetricConvention::from_kappa(0.7).is_err());
        assert_eq!(MetricConvention::default().kappa(), 0.5);
    }

    #[test]
    fn quadratic_curve_on_flat_manifold() {
        // θ(ξ) = ξ² on the constant scenario with F = 1, κ = 1:
        // L = ∫ 2ξ dξ = 1 and I = 1·∫ 4ξ² dξ = 4/3.
        let s = ScenarioSpec::natural(ScenarioKind::Constant, 0.5, 1.0).unwrap();
        let xi = linspace(0.0, 1.0, 2001).unwrap();
        let theta: Vec<f64> = xi.iter().map(|&x| x * x).collect();
        let dots: Vec<f64> = xi.iter().map(|&x| 2.0 * x).collect();

        // Exact-derivative route.
        let path = SampledPath::new(xi.clone(), theta.clone(), Some(dots)).unwrap();
        let pf = path_functionals(&s, MetricConvention::KappaOne, &path).unwrap();
        assert!((pf.length - 1.0).abs() < 1e-10);
        assert!((pf.divergence - 4.0 / 3.0).abs() < 1e-10);
        assert!((pf.tau - 1.0).abs() < TOL);

        // Finite-difference route.
        let path = SampledPath::new(xi, theta, None).unwrap();
        let pf = path_functionals(&s, MetricConvention::KappaOne, &path).unwrap();
        assert!((pf.length - 1.0).abs() < 1e-7);
        assert!((pf.divergence - 4.0 / 3.0).abs() < 1e-7);

        // Functional route.
        let pf = path_functionals_fn(
            &s,
            MetricConvention::KappaOne,
            &|xi| xi * xi,
            &|xi| 2.0 * xi,
            0.0,
            1.0,
        )
        .unwrap();
        assert!((pf.length - 1.0).abs() < 1e-10);
        assert!((pf.divergence - 4.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn affine_path_functionals_closed_form() {
        // Constant-speed line: L = √g₀·θ̇₀·τ and I = L².
        let s = working_spec(ScenarioKind::Constant);
        let conv = MetricConvention::KappaHalf;
        let g0 = metric(&s, conv, 0.0).unwrap();
        let (theta0, dot0, tau) = (1.0, 0.8, 2.0);
        let pf = path_functionals_fn(
            &s,
            conv,
            &|xi| theta0 + dot0 * xi,
            &|_| dot0,
            0.0,
            tau,
        )
        .unwrap();
        let length = g0.sqrt() * dot0 * tau;
        assert!((pf.length - length).abs() < 1e-12);
        assert!((pf.divergence - tau * tau * g0 * dot0 * dot0).abs() < 1e-12);
        assert!((pf.divergence - pf.length * pf.length).abs() < 1e-12);
    }

    #[test]
    fn length_is_reparametrization_invariant() {
        // Same image traversed with a smooth monotone clock change.
        let s = working_spec(ScenarioKind::Exponential);
        let conv = MetricConvention::KappaHalf;
        let direct = path_functionals_fn(&s, conv, &|xi| 0.2 + xi, &|_| 1.0, 0.0, 1.0).unwrap();
        let warp = |u: f64| 3.0 * u * u - 2.0 * u * u * u;
        let warp_dot = |u: f64| 6.0 * u - 6.0 * u * u;
        let warped = path_functionals_fn(
            &s,
            conv,
            &|u| 0.2 + warp(u),
            &|u| warp_dot(u),
            0.0,
            1.0,
        )
        .unwrap();
        assert!((direct.length - warped.length).abs() < 1e-6);
        // The action is *not* invariant; the straight clock minimizes it.
        assert!(warped.divergence > direct.divergence);
    }

    #[test]
    fn kappa_covariance_of_functionals() {
        let s = working_spec(ScenarioKind::PowerLaw);
        let theta = |xi: f64| 0.5 + 0.6 * xi + 0.2 * xi * xi;
        let dot = |xi: f64| 0.6 + 0.4 * xi;
        let half =
            path_functionals_fn(&s, MetricConvention::KappaHalf, &theta, &dot, 0.0, 1.5).unwrap();
        let one =
            path_functionals_fn(&s, MetricConvention::KappaOne, &theta, &dot, 0.0, 1.5).unwrap();
        assert!((one.length - 2.0 * half.length).abs() < 1e-10 * one.length);
        assert!((one.divergence - 4.0 * half.divergence).abs() < 1e-10 * one.divergence);
        let ratio_half = half.divergence / (half.length * half.length);
        let ratio_one = one.divergence / (one.length * one.length);
        assert!((ratio_half - ratio_one).abs() < 1e-12 * ratio_one);
    }

    #[test]
    fn zero_motion_path_has_zero_functionals() {
        let s = working_spec(ScenarioKind::Constant);
        let xi = linspace(0.0, 1.0, 11).unwrap();
        let theta = vec![0.7; 11];
        let path = SampledPath::new(xi, theta, None).unwrap();
        let pf = path_functionals(&s, MetricConvention::KappaHalf, &path).unwrap();
        assert!(pf.length.abs() < TOL);
        assert!(pf.divergence.abs() < TOL);
    }

    #[test]
    fn sampled_path_validation() {
        assert!(SampledPath::new(vec![0.0, 1.0], vec![0.0, 1.0], None).is_err());
        assert!(SampledPath::new(vec![0.0, 1.0, 0.5], vec![0.0, 1.0, 2.0], None).is_err());
        assert!(
            SampledPath::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 2.0], Some(vec![1.0])).is_err()
        );
    }

    #[test]
    fn probability_path_validation() {
        let theta = vec![0.0, 0.5, 1.0];
        assert!(ProbabilityPath::new(theta.clone(), vec![0.0, 0.5], vec![1.0, 0.5]).is_err());
        assert!(ProbabilityPath::new(
            theta.clone(),
            vec![0.0, 0.5, 1.2],
            vec![1.0, 0.5, -0.2]
        )
        .is_err());
        assert!(ProbabilityPath::new(
            theta.clone(),
            vec![0.0, 0.5, 0.9],
            vec![1.0, 0.4, 0.1]
        )
        .is_err());
        assert!(ProbabilityPath::new(theta, vec![0.0, 0.5, 0.9], vec![1.0, 0.5, 0.1]).is_ok());
    }

    proptest! {
        #[test]
        fn cauchy_schwarz_bound_holds(
            kind_idx in 0usize..4,
            a0 in 0.2f64..1.0,
            a1 in -0.3f64..0.3,
            a2 in -0.2f64..0.2,
            a3 in -0.1f64..0.1,
            tau in 0.3f64..2.0,
        ) {
            // Smooth positive curves built from a low-order mode expansion.
            let kind = ScenarioKind::ALL[kind_idx];
            let s = working_spec(kind);
            let pi = std::f64::consts::PI;
            let theta = move |xi: f64| {
                let u = xi / tau;
                a0 + 0.5 * a0 * u
                    + a1 * (pi * u).sin()
                    + a2 * (2.0 * pi * u).sin()
                    + a3 * (3.0 * pi * u).sin()
            };
            let theta_dot = move |xi: f64| {
                let u = xi / tau;
                (0.5 * a0
                    + a1 * pi * (pi * u).cos()
                    + a2 * 2.0 * pi * (2.0 * pi * u).cos()
                    + a3 * 3.0 * pi * (3.0 * pi * u).cos())
                    / tau
            };
            // Coefficient bounds keep theta positive: a0 >= 0.2 and
            // |a1|+|a2|+|a3| <= 0.6 < a0 + ... not guaranteed; clamp check:
            prop_assume!((0..=100).all(|k| theta(tau * k as f64 / 100.0) > 0.0));
            let pf = path_functionals_fn(&s, MetricConvention::KappaHalf, &theta, &theta_dot, 0.0, tau).unwrap();
            prop_assert!(pf.divergence - pf.length * pf.length >= -1e-9);
        }
    }
}
