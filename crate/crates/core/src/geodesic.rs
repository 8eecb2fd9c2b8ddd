//! Geodesics of the one-dimensional statistical metric g(θ) = κ²F(θ).
//!
//! In one dimension the geodesic equation reads
//!
//!   θ̈ + Γ(θ)·θ̇² = 0,   Γ(θ) = F'(θ)/(2F(θ)),
//!
//! independent of κ. Each driving scenario admits a closed-form solution
//! through (θ₀, θ̇₀) at ξ₀:
//!
//! | kind        | Γ(θ)            | θ(ξ₀ + Δ)                                  |
//! |-------------|-----------------|--------------------------------------------|
//! | constant    | 0               | θ₀ + θ̇₀Δ                                  |
//! | oscillatory | -λ·tan(λθ)      | (1/λ)·arcsin[sin(λθ₀) + λθ̇₀cos(λθ₀)Δ]     |
//! | powerlaw    | -2λ/(1 + λθ)    | (1/λ)·[(1+λθ₀)²/((1+λθ₀) - λθ̇₀Δ) - 1]     |
//! | exponential | -λ              | θ₀ - (1/λ)·ln(1 - λθ̇₀Δ)                   |
//!
//! Each form is exact only inside a validity interval, at whose edge the
//! motion runs into a metric degeneracy or escapes to infinity. A classical
//! fourth-order Runge–Kutta integrator provides the independent check, and
//! [`ode_residual`] measures how well any curve satisfies the equation.
//!
//! An alternative oscillatory expression in circulation,
//! θ = θ₀ + (√(1-λ²ξ₀²)/λ)·θ̇₀·[arcsin(λξ) - arcsin(λξ₀)], is kept available
//! as [`oscillatory_arcsin_variant`]: it solves the equation only when its
//! initial data happen to satisfy sin(λθ₀) = λξ₀ and θ̇₀cos(λθ₀) = 1, and
//! the residual diagnostic flags it for generic initial conditions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infogeo::{path_functionals_fn, MetricConvention, PathFunctionals, SampledPath};
use crate::numerics::{derivative_five_point, second_derivative_five_point};
use crate::scenario::{ScenarioKind, ScenarioSpec};

/// Stencil half-spacing used by [`ode_residual`]. With fourth-order
/// five-point stencils this keeps the combined truncation and rounding
/// error near 1e-9 for curves of order-one magnitude.
pub const RESIDUAL_STENCIL_H: f64 = 1e-3;

/// Cosine magnitude below which the oscillatory connection is treated as
/// sitting on the metric degeneracy.
pub const DEGENERACY_COS_TOL: f64 = 1e-12;

/// Initial data (θ₀, θ̇₀) posed at affine parameter ξ₀, validated to the
/// quadrant where every closed form applies: θ₀ > 0, θ̇₀ > 0, ξ₀ ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialConditions {
    theta0: f64,
    thetadot0: f64,
    xi0: f64,
}

impl InitialConditions {
    pub fn new(theta0: f64, thetadot0: f64, xi0: f64) -> Result<Self> {
        if !(theta0.is_finite() && theta0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "theta0",
                value: theta0,
                requirement: "must be finite and positive",
            });
        }
        if !(thetadot0.is_finite() && thetadot0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "thetadot0",
                value: thetadot0,
                requirement: "must be finite and positive",
            });
        }
        if !(xi0.is_finite() && xi0 >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "xi0",
                value: xi0,
                requirement: "must be finite and non-negative",
            });
        }
        Ok(Self {
            theta0,
            thetadot0,
            xi0,
        })
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn thetadot0(&self) -> f64 {
        self.thetadot0
    }

    pub fn xi0(&self) -> f64 {
        self.xi0
    }
}

/// Connection coefficient Γ(θ) = F'(θ)/(2F(θ)) of the scenario metric.
/// Errors on θ < 0 and at the oscillatory metric degeneracy
/// |cos(λθ)| < [`DEGENERACY_COS_TOL`].
pub fn connection(spec: &ScenarioSpec, theta: f64) -> Result<f64> {
    if !(theta >= 0.0) {
        return Err(Error::OutsideDomain {
            what: "theta",
            value: theta,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let l = spec.lambda();
    Ok(match spec.kind() {
        ScenarioKind::Constant => 0.0,
        ScenarioKind::Oscillatory => {
            let (s, c) = (l * theta).sin_cos();
            if c.abs() < DEGENERACY_COS_TOL {
                return Err(Error::OutsideDomain {
                    what: "theta at oscillatory metric degeneracy",
                    value: theta,
                    lo: 0.0,
                    hi: std::f64::consts::FRAC_PI_2 / l,
                });
            }
            -l * s / c
        }
        ScenarioKind::PowerLaw => -2.0 * l / (1.0 + l * theta),
        ScenarioKind::Exponential => -l,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Form {
    /// θ = θ₀ + θ̇₀Δ.
    Affine,
    /// θ = (1/λ)·arcsin(s₀ + λcΔ) with s₀ = sin(λθ₀), c = θ̇₀cos(λθ₀).
    ArcsinTracked { s0: f64, c: f64 },
    /// θ = (1/λ)·(a²/(a - λθ̇₀Δ) - 1) with a = 1 + λθ₀.
    InversePower { a: f64 },
    /// θ = θ₀ - (1/λ)·ln(1 - λθ̇₀Δ).
    LogBarrier,
    /// θ = θ₀ + pref·(arcsin(λξ) - arcsin(λξ₀)); not a geodesic for
    /// generic initial data.
    ArcsinOfXi { pref: f64 },
}

/// A closed-form curve through given initial data, with its validity
/// interval in the affine parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicSolution {
    kind: ScenarioKind,
    lambda: f64,
    ic: InitialConditions,
    form: Form,
    validity: (f64, f64),
}

impl GeodesicSolution {
    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    pub fn initial_conditions(&self) -> InitialConditions {
        self.ic
    }

    /// Open interval of affine parameters on which the form is valid.
    pub fn validity(&self) -> (f64, f64) {
        self.validity
    }

    fn check_xi(&self, xi: f64) -> Result<()> {
        let (lo, hi) = self.validity;
        if !(xi > lo && xi < hi) {
            return Err(Error::OutsideDomain {
                what: "affine parameter",
                value: xi,
                lo,
                hi,
            });
        }
        Ok(())
    }

    fn theta_raw(&self, xi: f64) -> f64 {
        let d = xi - self.ic.xi0;
        let l = self.lambda;
        match self.form {
            Form::Affine => self.ic.theta0 + self.ic.thetadot0 * d,
            Form::ArcsinTracked { s0, c } => (s0 + l * c * d).asin() / l,
            Form::InversePower { a } => (a * a / (a - l * self.ic.thetadot0 * d) - 1.0) / l,
            Form::LogBarrier => self.ic.theta0 - (1.0 - l * self.ic.thetadot0 * d).ln() / l,
            Form::ArcsinOfXi { pref } => {
                self.ic.theta0 + pref * ((l * xi).asin() - (l * self.ic.xi0).asin())
            }
        }
    }

    fn theta_dot_raw(&self, xi: f64) -> f64 {
        let d = xi - self.ic.xi0;
        let l = self.lambda;
        match self.form {
            Form::Affine => self.ic.thetadot0,
            Form::ArcsinTracked { s0, c } => {
                let s = s0 + l * c * d;
                c / (1.0 - s * s).sqrt()
            }
            Form::InversePower { a } => {
                let den = a - l * self.ic.thetadot0 * d;
                self.ic.thetadot0 * a * a / (den * den)
            }
            Form::LogBarrier => self.ic.thetadot0 / (1.0 - l * self.ic.thetadot0 * d),
            Form::ArcsinOfXi { pref } => {
                let lx = l * xi;
                pref * l / (1.0 - lx * lx).sqrt()
            }
        }
    }

    /// Curve value θ(ξ); errors outside the validity interval.
    pub fn theta(&self, xi: f64) -> Result<f64> {
        self.check_xi(xi)?;
        Ok(self.theta_raw(xi))
    }

    /// Curve slope θ̇(ξ); errors outside the validity interval.
    pub fn theta_dot(&self, xi: f64) -> Result<f64> {
        self.check_xi(xi)?;
        Ok(self.theta_dot_raw(xi))
    }

    /// Sample the curve (with exact derivatives) over a ξ grid.
    pub fn sample(&self, xi_grid: &[f64]) -> Result<SampledPath> {
        let mut theta = Vec::with_capacity(xi_grid.len());
        let mut dot = Vec::with_capacity(xi_grid.len());
        for &xi in xi_grid {
            theta.push(self.theta(xi)?);
            dot.push(self.theta_dot(xi)?);
        }
        SampledPath::new(xi_grid.to_vec(), theta, Some(dot))
    }
}

/// Closed-form geodesic of the scenario metric through `ic`.
///
/// For the oscillatory metric the principal arcsin branch is used, which
/// requires the initial point to sit before the first metric degeneracy:
/// λθ₀ < π/2.
pub fn geodesic_closed_form(spec: &ScenarioSpec, ic: InitialConditions) -> Result<GeodesicSolution> {
    let l = spec.lambda();
    let (form, validity) = match spec.kind() {
        ScenarioKind::Constant => (Form::Affine, (f64::NEG_INFINITY, f64::INFINITY)),
        ScenarioKind::Oscillatory => {
            if l * ic.theta0 >= std::f64::consts::FRAC_PI_2 {
                return Err(Error::OutsideDomain {
                    what: "lambda * theta0 (principal oscillatory branch)",
                    value: l * ic.theta0,
                    lo: 0.0,
                    hi: std::f64::consts::FRAC_PI_2,
                });
            }
            let (s0, c0) = (l * ic.theta0).sin_cos();
            let c = ic.thetadot0 * c0;
            let lo = ic.xi0 + (-1.0 - s0) / (l * c);
            let hi = ic.xi0 + (1.0 - s0) / (l * c);
            (Form::ArcsinTracked { s0, c }, (lo, hi))
        }
        ScenarioKind::PowerLaw => {
            let a = 1.0 + l * ic.theta0;
            let hi = ic.xi0 + a / (l * ic.thetadot0);
            (Form::InversePower { a }, (f64::NEG_INFINITY, hi))
        }
        ScenarioKind::Exponential => {
            let hi = ic.xi0 + 1.0 / (l * ic.thetadot0);
            (Form::LogBarrier, (f64::NEG_INFINITY, hi))
        }
    };
    Ok(GeodesicSolution {
        kind: spec.kind(),
        lambda: l,
        ic,
        form,
        validity,
    })
}

/// The alternative oscillatory expression
/// θ = θ₀ + (√(1-λ²ξ₀²)/λ)·θ̇₀·[arcsin(λξ) - arcsin(λξ₀)].
///
/// Kept for comparison purposes: it satisfies the geodesic equation only
/// for initial data with sin(λθ₀) = λξ₀ and θ̇₀cos(λθ₀) = 1, and
/// [`ode_residual`] exposes the violation elsewhere.
pub fn oscillatory_arcsin_variant(
    spec: &ScenarioSpec,
    ic: InitialConditions,
) -> Result<GeodesicSolution> {
    if spec.kind() != ScenarioKind::Oscillatory {
        return Err(Error::InvalidParameter {
            name: "kind",
            value: f64::NAN,
            requirement: "the arcsin-of-xi variant applies to the oscillatory scenario only",
        });
    }
    let l = spec.lambda();
    if l * ic.xi0 >= 1.0 {
        return Err(Error::OutsideDomain {
            what: "lambda * xi0",
            value: l * ic.xi0,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let pref = (1.0 - l * l * ic.xi0 * ic.xi0).sqrt() * ic.thetadot0 / l;
    Ok(GeodesicSolution {
        kind: spec.kind(),
        lambda: l,
        ic,
        form: Form::ArcsinOfXi { pref },
        validity: (-1.0 / l, 1.0 / l),
    })
}

/// Residual of the geodesic equation, θ̈ + Γ(θ)θ̇², for an arbitrary curve
/// given as a function of the affine parameter. Derivatives are taken with
/// fourth-order five-point stencils of half-spacing
/// [`RESIDUAL_STENCIL_H`]; evaluation errors (for instance the stencil
/// leaving the curve's validity interval) propagate.
pub fn ode_residual<F>(spec: &ScenarioSpec, theta_fn: F, xi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let second = second_derivative_five_point(&theta_fn, xi, RESIDUAL_STENCIL_H)?;
    let first = derivative_five_point(&theta_fn, xi, RESIDUAL_STENCIL_H)?;
    let gamma = connection(spec, theta_fn(xi)?)?;
    Ok(second + gamma * first * first)
}

/// Numerically integrated geodesic: θ and θ̇ at every requested grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericPath {
    pub xi: Vec<f64>,
    pub theta: Vec<f64>,
    pub theta_dot: Vec<f64>,
}

impl NumericPath {
    /// View as a sampled path carrying the integrator's exact derivative
    /// samples (needs at least three nodes).
    pub fn to_sampled(&self) -> Result<SampledPath> {
        SampledPath::new(
            self.xi.clone(),
            self.theta.clone(),
            Some(self.theta_dot.clone()),
        )
    }
}

/// Integrate the geodesic equation with classical fourth-order
/// Runge–Kutta over exactly the nodes of `xi_grid` (the grid spacing *is*
/// the step size; `xi_grid[0]` must equal the initial ξ₀). If the motion
/// runs into a metric degeneracy or blows up, integration halts with
/// [`Error::SingularApproach`] reporting the last grid node that was
/// still reached.
pub fn geodesic_numeric(
    spec: &ScenarioSpec,
    ic: InitialConditions,
    xi_grid: &[f64],
) -> Result<NumericPath> {
    if xi_grid.len() < 2 {
        return Err(Error::Grid("need at least two nodes"));
    }
    if xi_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Grid("abscissae must be strictly increasing"));
    }
    if (xi_grid[0] - ic.xi0).abs() > 1e-12 * ic.xi0.abs().max(1.0) {
        return Err(Error::Grid("grid must start at the initial xi0"));
    }

    let accel = |theta: f64, v: f64| -> Result<f64> { Ok(-connection(spec, theta)? * v * v) };

    let mut theta = ic.theta0;
    let mut v = ic.thetadot0;
    let mut thetas = Vec::with_capacity(xi_grid.len());
    let mut dots = Vec::with_capacity(xi_grid.len());
    thetas.push(theta);
    dots.push(v);

    for i in 0..xi_grid.len() - 1 {
        let h = xi_grid[i + 1] - xi_grid[i];
        let step = (|| -> Result<(f64, f64)> {
            let k1t = v;
            let k1v = accel(theta, v)?;
            let k2t = v + 0.5 * h * k1v;
            let k2v = accel(theta + 0.5 * h * k1t, v + 0.5 * h * k1v)?;
            let k3t = v + 0.5 * h * k2v;
            let k3v = accel(theta + 0.5 * h * k2t, v + 0.5 * h * k2v)?;
            let k4t = v + h * k3v;
            let k4v = accel(theta + h * k3t, v + h * k3v)?;
            Ok((
                theta + h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t),
                v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
            ))
        })();
        match step {
            Ok((t_next, v_next)) if t_next.is_finite() && v_next.is_finite() => {
                theta = t_next;
                v = v_next;
            }
            _ => {
                return Err(Error::SingularApproach {
                    last_valid_xi: xi_grid[i],
                });
            }
        }
        thetas.push(theta);
        dots.push(v);
    }

    Ok(NumericPath {
        xi: xi_grid.to_vec(),
        theta: thetas,
        theta_dot: dots,
    })
}

/// Length and action of a closed-form geodesic over [ξ₀, ξ₀ + τ], by
/// adaptive quadrature on the exact curve.
pub fn geodesic_action(
    spec: &ScenarioSpec,
    convention: MetricConvention,
    solution: &GeodesicSolution,
    tau: f64,
) -> Result<PathFunctionals> {
    let a = solution.ic.xi0;
    let b = a + tau;
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            requirement: "must be finite and positive",
        });
    }
    let (lo, hi) = solution.validity;
    if !(a > lo && b < hi) {
        return Err(Error::OutsideDomain {
            what: "geodesic segment end",
            value: b,
            lo,
            hi,
        });
    }
    path_functionals_fn(
        spec,
        convention,
        &|xi| solution.theta_raw(xi),
        &|xi| solution.theta_dot_raw(xi),
        a,
        b,
    )
}

/// Number of positions scanned when checking that a perturbed path stays
/// inside the scenario's domain.
const PERTURBATION_SCAN: usize = 2000;

/// Action and length of the geodesic perturbed by a sine mode that
/// vanishes at both segment ends:
///
///   θ_ε(ξ) = θ_geo(ξ) + ε·sin(kπ(ξ-ξ₀)/τ).
///
/// The derivative is formed analytically, and the perturbed path must stay
/// inside the scenario's domain (θ_ε ≥ 0 everywhere; for the oscillatory
/// metric also λθ_ε < π/2). Comparing against [`geodesic_action`] exhibits
/// the geodesic as the action minimizer.
pub fn perturbed_action(
    spec: &ScenarioSpec,
    convention: MetricConvention,
    ic: InitialConditions,
    tau: f64,
    epsilon: f64,
    k: u32,
) -> Result<PathFunctionals> {
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "k",
            value: 0.0,
            requirement: "mode number must be at least 1",
        });
    }
    if !epsilon.is_finite() {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: epsilon,
            requirement: "must be finite",
        });
    }
    let solution = geodesic_closed_form(spec, ic)?;
    let a = ic.xi0;
    let b = a + tau;
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            requirement: "must be finite and positive",
        });
    }
    let (lo, hi) = solution.validity;
    if !(a > lo && b < hi) {
        return Err(Error::OutsideDomain {
            what: "geodesic segment end",
            value: b,
            lo,
            hi,
        });
    }

    let omega = k as f64 * std::f64::consts::PI / tau;
    let theta = |xi: f64| solution.theta_raw(xi) + epsilon * (omega * (xi - a)).sin();
    let theta_dot =
        |xi: f64| solution.theta_dot_raw(xi) + epsilon * omega * (omega * (xi - a)).cos();

    let mut min_theta = f64::INFINITY;
    let mut max_theta = f64::NEG_INFINITY;
    for j in 0..=PERTURBATION_SCAN {
        let xi = a + tau * j as f64 / PERTURBATION_SCAN as f64;
        let t = theta(xi);
        min_theta = min_theta.min(t);
        max_theta = max_theta.max(t);
    }
    if min_theta < 0.0 {
        return Err(Error::OutsideDomain {
            what: "perturbed path theta",
            value: min_theta,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    if spec.kind() == ScenarioKind::Oscillatory {
        let limit = std::f64::consts::FRAC_PI_2 / spec.lambda();
        if max_theta >= limit {
            return Err(Error::OutsideDomain {
                what: "perturbed path theta",
                value: max_theta,
                lo: 0.0,
                hi: limit,
            });
        }
    }

    path_functionals_fn(spec, convention, &theta, &theta_dot, a, b)
}
