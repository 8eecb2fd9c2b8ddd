//! Shared numerical plumbing: adaptive Simpson quadrature, bisection,
//! finite-difference stencils, and grid helpers.
//!
//! These routines double as independent cross-checks for the closed forms
//! elsewhere in the crate, so they deliberately avoid calling into any of
//! the physics modules.

use crate::error::{Error, Result};

/// Relative agreement required between successive refinements in
/// [`simpson_adaptive`].
pub const QUADRATURE_REL_TOL: f64 = 1e-10;

/// Subinterval cap for [`simpson_adaptive`].
pub const QUADRATURE_MAX_INTERVALS: usize = 1 << 20;

/// Integrate `f` over `[a, b]` with composite Simpson quadrature, doubling
/// the subdivision until two successive estimates agree to
/// [`QUADRATURE_REL_TOL`] in relative terms, then applying one Richardson
/// extrapolation step to the final pair. Fails if the interval cap is
/// reached first or the integrand produces non-finite values.
pub fn simpson_adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "integration interval",
            value: b - a,
            requirement: "endpoints must be finite",
        });
    }
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return Err(Error::InvalidParameter {
            name: "integration interval",
            value: b - a,
            requirement: "upper limit must not be below lower limit",
        });
    }

    let fa = f(a);
    let fb = f(b);
    let mut n: usize = 8;
    let h0 = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for k in 1..n {
        let v = f(a + k as f64 * h0);
        if k % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    let mut prev = h0 / 3.0 * (fa + fb + 4.0 * odd + 2.0 * even);

    loop {
        even += odd;
        n *= 2;
        let h = (b - a) / n as f64;
        odd = 0.0;
        let mut k = 1;
        while k < n {
            odd += f(a + k as f64 * h);
            k += 2;
        }
        let current = h / 3.0 * (fa + fb + 4.0 * odd + 2.0 * even);
        if !current.is_finite() {
            return Err(Error::NonFiniteIntegrand { at: a });
        }
        let change = (current - prev).abs();
        if change <= QUADRATURE_REL_TOL * current.abs().max(f64::MIN_POSITIVE) {
            // Composite Simpson converges as h^4; one Richardson step on
            // the last halving removes the leading error term.
            return Ok(current + (current - prev) / 15.0);
        }
        if n >= QUADRATURE_MAX_INTERVALS {
            return Err(Error::QuadratureStalled {
                estimate: current,
                change,
            });
        }
        prev = current;
    }
}

/// Find a root of `f` on `[lo, hi]` by bisection. The endpoints must
/// bracket a sign change. Iterates until the half-interval drops below
/// `tol` (or an endpoint/midpoint evaluates to exactly zero), with
/// `max_iter` as a hard cap.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NotBracketed { lo, hi });
    }
    let mut flo = flo;
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 || 0.5 * (hi - lo) < tol {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Fourth-order central first derivative on a five-point stencil of
/// half-width `2h`. Evaluation errors from `f` (for example the stencil
/// leaving the function's domain) propagate to the caller.
pub fn derivative_five_point<F: Fn(f64) -> Result<f64>>(f: F, x: f64, h: f64) -> Result<f64> {
    Ok((-f(x + 2.0 * h)? + 8.0 * f(x + h)? - 8.0 * f(x - h)? + f(x - 2.0 * h)?) / (12.0 * h))
}

/// Fourth-order central second derivative on a five-point stencil of
/// half-width `2h`.
pub fn second_derivative_five_point<F: Fn(f64) -> Result<f64>>(
    f: F,
    x: f64,
    h: f64,
) -> Result<f64> {
    Ok(
        (-f(x + 2.0 * h)? + 16.0 * f(x + h)? - 30.0 * f(x)? + 16.0 * f(x - h)?
            - f(x - 2.0 * h)?)
            / (12.0 * h * h),
    )
}

fn check_grid(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Grid("abscissa and ordinate lengths differ"));
    }
    if x.len() < 3 {
        return Err(Error::Grid("need at least three nodes"));
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Grid("abscissae must be strictly increasing"));
    }
    if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Grid("values must be finite"));
    }
    Ok(())
}

/// Second-order first derivative of samples `y` on the strictly increasing
/// grid `x`: three-point central stencils in the interior (exact for
/// non-uniform spacing) and one-sided three-point stencils at both ends.
pub fn grid_derivative(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    check_grid(x, y)?;
    let n = x.len();
    let mut d = vec![0.0; n];
    {
        let h1 = x[1] - x[0];
        let h2 = x[2] - x[1];
        d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1]
            - h1 / (h2 * (h1 + h2)) * y[2];
    }
    for i in 1..n - 1 {
        let h1 = x[i] - x[i - 1];
        let h2 = x[i + 1] - x[i];
        d[i] = (h1 * h1 * y[i + 1] - h2 * h2 * y[i - 1] + (h2 * h2 - h1 * h1) * y[i])
            / (h1 * h2 * (h1 + h2));
    }
    {
        let h1 = x[n - 2] - x[n - 3];
        let h2 = x[n - 1] - x[n - 2];
        d[n - 1] = h2 / (h1 * (h1 + h2)) * y[n - 3] - (h1 + h2) / (h1 * h2) * y[n - 2]
            + (2.0 * h2 + h1) / (h2 * (h1 + h2)) * y[n - 1];
    }
    Ok(d)
}

/// Composite Simpson integration of samples `y` over the strictly
/// increasing grid `x` (at least three nodes, non-uniform spacing
/// allowed). Quadratics span interval pairs; when the interval count is
/// odd, the final interval is integrated under the quadratic through the
/// last three nodes.
pub fn simpson_samples(x: &[f64], y: &[f64]) -> Result<f64> {
    check_grid(x, y)?;
    let n = x.len();
    let intervals = n - 1;
    let mut total = 0.0;
    for p in 0..intervals / 2 {
        let i = 2 * p;
        let h0 = x[i + 1] - x[i];
        let h1 = x[i + 2] - x[i + 1];
        total += (h0 + h1) / 6.0
            * ((2.0 - h1 / h0) * y[i]
                + (h0 + h1) * (h0 + h1) / (h0 * h1) * y[i + 1]
                + (2.0 - h0 / h1) * y[i + 2]);
    }
    if intervals % 2 == 1 {
        let h1 = x[n - 2] - x[n - 3];
        let h2 = x[n - 1] - x[n - 2];
        total += y[n - 1] * (2.0 * h2 * h2 + 3.0 * h1 * h2) / (6.0 * (h1 + h2))
            + y[n - 2] * (h2 * h2 + 3.0 * h1 * h2) / (6.0 * h1)
            - y[n - 3] * h2 * h2 * h2 / (6.0 * h1 * (h1 + h2));
    }
    Ok(total)
}

/// Evenly spaced grid with `count >= 2` nodes and exact endpoints.
pub fn linspace(a: f64, b: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::Grid("linspace needs at least two nodes"));
    }
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::Grid("linspace endpoints must be finite and increasing"));
    }
    let n = count - 1;
    let mut grid: Vec<f64> = (0..=n)
        .map(|k| a + (b - a) * k as f64 / n as f64)
        .collect();
    grid[0] = a;
    grid[n] = b;
    Ok(grid)
}
