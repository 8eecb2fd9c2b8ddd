//! The `verify` subcommand: an end-to-end self-check suite.
//!
//! Every check pits one computational route against an independent one
//! (closed form vs. integrator, analytic Fisher vs. finite differences,
//! direct speed formula vs. library value, ...) and records a figure of
//! merit against a fixed threshold.  The process exits 0 only when every
//! check passes; a failing check exits 1, and parameters that leave the
//! numerical domain exit 3 like everywhere else.
//!
//! For fault-injection tests the environment variable
//! `ENTROGEO_VERIFY_KAPPA` replaces κ in the *reference* speed formula
//! (not in the library call), so setting it to anything other than the
//! configured κ must make the `speed_formula` check fail.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use entrogeo_core::entropic::{entropic_speed, region_boundary, region_membership};
use entrogeo_core::geodesic::{
    geodesic_action, geodesic_closed_form, geodesic_numeric, ode_residual,
    oscillatory_arcsin_variant, perturbed_action, RESIDUAL_STENCIL_H,
};
use entrogeo_core::infogeo::{fisher_analytic, fisher_numeric, path_functionals_fn};
use entrogeo_core::numerics::linspace;
use entrogeo_core::quantum::{analytic_failure_probability, analytic_success_probability, propagate_schrodinger};
use entrogeo_core::{InitialConditions, ProbabilityPath, ScenarioKind};

use crate::commands::{render_table, CommandOutcome};
use crate::config::{CliError, OutputFormat, RunConfig};
use crate::emit::{Cell, CheckResult, ReportDocument, Table, VerificationSummary};

/// Environment variable that overrides κ in the reference speed formula.
pub const VERIFY_KAPPA_ENV: &str = "ENTROGEO_VERIFY_KAPPA";

fn check(name: &str, deviation: f64, threshold: f64, detail: &str) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: deviation <= threshold,
        deviation,
        threshold,
        detail: detail.to_string(),
    }
}

/// Sampling end for geodesic checks: the configured window, capped well
/// inside a finite validity boundary.
fn capped_end(ic: InitialConditions, tau: f64, hi: f64) -> f64 {
    let requested = ic.xi0() + tau;
    if hi.is_finite() {
        requested.min(ic.xi0() + 0.9 * (hi - ic.xi0()))
    } else {
        requested
    }
}

pub fn verify(cfg: &RunConfig) -> Result<CommandOutcome, CliError> {
    let summary = run_checks(cfg)?;
    let text = match cfg.format {
        OutputFormat::Json => {
            let mut doc = ReportDocument::new("verify", cfg);
            doc.verification = Some(summary.clone());
            doc.render()
        }
        OutputFormat::Csv => {
            let mut table = Table::new(vec!["check", "passed", "deviation", "threshold", "detail"]);
            for c in &summary.checks {
                table.push(vec![
                    Cell::Text(c.name.clone()),
                    Cell::Flag(c.passed),
                    Cell::Num(c.deviation),
                    Cell::Num(c.threshold),
                    Cell::Text(c.detail.clone()),
                ]);
            }
            table.footer_notes.push(format!(
                "overall: {}",
                if summary.passed { "PASS" } else { "FAIL" }
            ));
            render_table(cfg, "verify", table)
        }
    };
    Ok(CommandOutcome {
        text,
        verification_failed: !summary.passed,
    })
}

pub fn run_checks(cfg: &RunConfig) -> Result<VerificationSummary, CliError> {
    let conv = cfg.convention();
    // Resolve the fault-injection hook up front: a malformed value is a
    // configuration error, not a late surprise after half the suite ran.
    let kappa_ref = match std::env::var(VERIFY_KAPPA_ENV) {
        Ok(text) => text.trim().parse::<f64>().map_err(|_| {
            CliError::config(VERIFY_KAPPA_ENV, format!("must parse as a float, got {text:?}"))
        })?,
        Err(_) => conv.kappa(),
    };
    let ic = InitialConditions::new(cfg.theta0, cfg.thetadot0, cfg.xi0)?;
    let mut specs = Vec::with_capacity(4);
    for kind in ScenarioKind::ALL {
        specs.push(cfg.spec_for(kind)?);
    }

    let mut checks = Vec::new();

    // 1. Schrödinger propagation against the closed-form probability.
    {
        let mut worst = 0.0f64;
        for spec in &specs {
            let prop = propagate_schrodinger(spec, 5.0, cfg.steps)?;
            let stride = (cfg.steps / 50).max(1);
            let mut k = stride;
            while k < prop.times.len() {
                let p_closed = analytic_success_probability(spec, prop.times[k])?;
                worst = worst.max((prop.success_probabilities[k] - p_closed).abs());
                k += stride;
            }
            let last = prop.times.len() - 1;
            let p_closed = analytic_success_probability(spec, prop.times[last])?;
            worst = worst.max((prop.success_probabilities[last] - p_closed).abs());
        }
        checks.push(check(
            "schrodinger_oracle",
            worst,
            1e-6,
            "largest |p_numeric - p_closed| over t in [0; 5] across all scenarios at the configured step count",
        ));
    }

    // 2. Finite-difference Fisher information against the closed form.
    {
        let mut worst = 0.0f64;
        for spec in &specs {
            let fine = linspace(0.0, 5.1, 51_001)?;
            let path = ProbabilityPath::sample(spec, &fine)?;
            let g = spec.gamma_over_hbar();
            let scale = 4.0 * g * g;
            for m in 1..=100 {
                let theta = 0.05 * m as f64;
                let p = analytic_success_probability(spec, theta)?;
                let q = analytic_failure_probability(spec, theta)?;
                // Mask probability endpoints and metric-degenerate points:
                // the finite-difference quotient has no relative accuracy
                // where p·q or F itself vanishes.
                if p * q < 1e-3 {
                    continue;
                }
                let analytic = fisher_analytic(spec, theta)?;
                if analytic < 1e-6 * scale {
                    continue;
                }
                let numeric = fisher_numeric(spec, &path, theta)?;
                worst = worst.max(((numeric - analytic) / analytic).abs());
            }
        }
        checks.push(check(
            "fisher_oracle",
            worst,
            1e-6,
            "largest relative gap between the finite-difference and closed-form Fisher information away from probability endpoints",
        ));
    }

    // 3. Fisher information equals four times the squared pulse rate.
    {
        let mut worst = 0.0f64;
        for spec in &specs {
            let hbar = spec.constants().hbar;
            for m in 0..=100 {
                let theta = 0.05 * m as f64;
                let f = fisher_analytic(spec, theta)?;
                let du = spec.transverse_intensity_unchecked(theta) / hbar;
                let expect = 4.0 * du * du;
                let denom = f.max(expect).max(f64::MIN_POSITIVE);
                worst = worst.max((f - expect).abs() / denom);
            }
        }
        checks.push(check(
            "fisher_identity",
            worst,
            1e-12,
            "closed-form Fisher information against 4*(envelope/hbar)^2 evaluated from the field",
        ));
    }

    // 4. Closed-form geodesics solve their equation of motion.
    {
        let margin = 2.5 * RESIDUAL_STENCIL_H;
        let mut worst = 0.0f64;
        for spec in &specs {
            let sol = geodesic_closed_form(spec, ic)?;
            let (_, hi) = sol.validity();
            let end = capped_end(ic, cfg.tau, hi);
            for &xi in &linspace(ic.xi0() + margin, end, 50)? {
                let r = ode_residual(spec, |x| sol.theta(x), xi)?;
                worst = worst.max(r.abs());
            }
        }
        checks.push(check(
            "geodesic_residual",
            worst,
            1e-8,
            "largest |theta'' + Gamma(theta) theta'^2| along the closed-form geodesics",
        ));
    }

    // 5. Runge–Kutta reintegration lands on the closed form.
    {
        let mut worst = 0.0f64;
        for spec in &specs {
            let sol = geodesic_closed_form(spec, ic)?;
            let (_, hi) = sol.validity();
            let end = capped_end(ic, cfg.tau.min(1.0), hi);
            let steps = (((end - ic.xi0()) / 1e-4).ceil() as usize).max(2);
            let grid = linspace(ic.xi0(), end, steps + 1)?;
            let numeric = geodesic_numeric(spec, ic, &grid)?;
            for (i, &xi) in grid.iter().enumerate() {
                worst = worst.max((numeric.theta[i] - sol.theta(xi)?).abs());
            }
        }
        checks.push(check(
            "geodesic_integrator",
            worst,
            1e-7,
            "largest gap between the Runge-Kutta geodesic at step 1e-4 and the closed form",
        ));
    }

    // 6. Entropic speed is conserved along each geodesic.
    {
        let kappa = conv.kappa();
        let mut worst = 0.0f64;
        for spec in &specs {
            let sol = geodesic_closed_form(spec, ic)?;
            let (_, hi) = sol.validity();
            let end = capped_end(ic, cfg.tau, hi);
            let mut lo_v = f64::INFINITY;
            let mut hi_v = f64::NEG_INFINITY;
            for &xi in &linspace(ic.xi0(), end, 200)? {
                let theta = sol.theta(xi)?;
                let v = kappa * fisher_analytic(spec, theta)?.sqrt() * sol.theta_dot(xi)?;
                lo_v = lo_v.min(v);
                hi_v = hi_v.max(v);
            }
            worst = worst.max((hi_v - lo_v) / hi_v.abs());
        }
        checks.push(check(
            "constant_speed",
            worst,
            1e-7,
            "relative spread of kappa*sqrt(F)*theta_dot along each closed-form geodesic",
        ));
    }

    // 7. Sine-mode perturbations never beat the geodesic.
    {
        let mut violation = 0.0f64;
        for spec in &specs {
            let sol = geodesic_closed_form(spec, ic)?;
            let (_, hi) = sol.validity();
            let tau_use = capped_end(ic, cfg.tau, hi) - ic.xi0();
            let base = geodesic_action(spec, conv, &sol, tau_use)?;
            for k in 1..=4u32 {
                for eps in [-0.1, -0.05, 0.02, 0.06, 0.1] {
                    let p = perturbed_action(spec, conv, ic, tau_use, eps, k)?;
                    violation = violation
                        .max(base.divergence - p.divergence)
                        .max(base.length - p.length);
                }
            }
        }
        checks.push(check(
            "minimum_action",
            violation.max(0.0),
            1e-9,
            "largest amount by which a perturbed path undercut the geodesic action or length (20 sine modes per scenario)",
        ));
    }

    // 8. Cauchy–Schwarz: action dominates squared length on random paths.
    {
        let mut violation = 0.0f64;
        for (s_idx, spec) in specs.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + s_idx as u64);
            let tau = cfg.tau;
            for _ in 0..100 {
                let b0: f64 = rng.random_range(0.4..1.2);
                let b1: f64 = rng.random_range(0.1..0.8);
                let mut amp = [0.0f64; 3];
                for (m, a) in amp.iter_mut().enumerate() {
                    // Total sine amplitude stays below 0.55·b0, so θ > 0.
                    *a = rng.random_range(-1.0..1.0) * 0.3 * b0 / (m as f64 + 1.0);
                }
                let theta = |xi: f64| {
                    let mut t = b0 + b1 * xi;
                    for (m, a) in amp.iter().enumerate() {
                        t += a * ((m as f64 + 1.0) * std::f64::consts::PI * xi / tau).sin();
                    }
                    t
                };
                let theta_dot = |xi: f64| {
                    let mut d = b1;
                    for (m, a) in amp.iter().enumerate() {
                        let w = (m as f64 + 1.0) * std::f64::consts::PI / tau;
                        d += a * w * (w * xi).cos();
                    }
                    d
                };
                let pf = path_functionals_fn(spec, conv, &theta, &theta_dot, 0.0, tau)?;
                violation = violation.max(pf.length * pf.length - pf.divergence);
            }
        }
        checks.push(check(
            "cauchy_schwarz",
            violation.max(0.0),
            1e-9,
            "largest L^2 - I over 100 seeded random smooth paths per scenario (must stay non-positive)",
        ));
    }

    // 9. Equality I = L² holds on the (constant-speed) geodesics.
    {
        let mut worst = 0.0f64;
        for spec in &specs {
            let sol = geodesic_closed_form(spec, ic)?;
            let (_, hi) = sol.validity();
            let tau_use = capped_end(ic, cfg.tau, hi) - ic.xi0();
            let pf = geodesic_action(spec, conv, &sol, tau_use)?;
            worst = worst.max((pf.divergence - pf.length * pf.length).abs() / pf.divergence);
        }
        checks.push(check(
            "geodesic_equality",
            worst,
            1e-8,
            "relative gap |I - L^2|/I on each closed-form geodesic segment",
        ));
    }

    // 10. Library speed against the explicit scenario formula.
    {
        let mut worst = 0.0f64;
        for spec in &specs {
            let x = spec.lambda() * ic.theta0();
            let shape = match spec.kind() {
                ScenarioKind::Constant => 1.0,
                ScenarioKind::Oscillatory => x.cos().abs(),
                ScenarioKind::PowerLaw => (1.0 + x).powi(-2),
                ScenarioKind::Exponential => (-x).exp(),
            };
            let reference =
                2.0 * kappa_ref * spec.gamma_over_hbar() * shape * ic.thetadot0();
            let library = entropic_speed(spec, conv, ic)?;
            worst = worst.max(((library - reference) / reference).abs());
        }
        checks.push(check(
            "speed_formula",
            worst,
            1e-12,
            "entropic speed against 2*kappa*(gamma/hbar)*shape*thetadot0; the reference kappa honors ENTROGEO_VERIFY_KAPPA for fault injection",
        ));
    }

    // 11. The two region criteria agree everywhere on (0, 5]².
    {
        let xstar = region_boundary();
        let g = |x: f64| x.exp() - (1.0 + x) * (1.0 + x);
        let bracket_ok = g(xstar - 1e-9) < 0.0 && g(xstar + 1e-9) > 0.0;
        let mut disagreements = 0u64;
        for i in 1..=100 {
            for j in 1..=100 {
                let lambda = 0.05 * i as f64;
                let theta0 = 0.05 * j as f64;
                let s = region_membership(lambda, theta0)?;
                let x = lambda * theta0;
                if (x - xstar).abs() > 1e-9 && s.exponential_faster != (x < xstar) {
                    disagreements += 1;
                }
            }
        }
        let deviation = disagreements as f64 + if bracket_ok { 0.0 } else { 1.0 };
        checks.push(check(
            "region_equivalence",
            deviation,
            0.0,
            "indicator f_P < 1; the direct speed comparison; and the boundary root must tell one story on a 100x100 grid",
        ));
    }

    // 12. The alternative oscillatory expression is *not* a geodesic here.
    {
        let spec = &specs[1];
        debug_assert_eq!(spec.kind(), ScenarioKind::Oscillatory);
        let variant = oscillatory_arcsin_variant(spec, ic)?;
        let probe = ic.xi0() + 0.1 * cfg.tau;
        let residual = ode_residual(spec, |x| variant.theta(x), probe)?.abs();
        checks.push(CheckResult {
            name: "oscillatory_variant_flagged".to_string(),
            passed: residual > 1e-8,
            deviation: residual,
            threshold: 1e-8,
            detail: "equation-of-motion residual of the arcsin-of-xi variant at generic initial data; it must EXCEED the threshold".to_string(),
        });
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerificationSummary { passed, checks })
}
