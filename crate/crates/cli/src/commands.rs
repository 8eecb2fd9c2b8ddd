//! The tabulating subcommands: probabilities, fisher, geodesic, compare,
//! region.  Each builds an in-memory [`Table`] (or report) and renders it
//! through the emit layer in the configured format.

use entrogeo_core::geodesic::{geodesic_closed_form, geodesic_numeric, ode_residual, RESIDUAL_STENCIL_H};
use entrogeo_core::infogeo::{fisher_analytic, fisher_numeric};
use entrogeo_core::numerics::linspace;
use entrogeo_core::entropic::{region_boundary, region_membership, scenario_report, ReportParameters};
use entrogeo_core::{InitialConditions, ProbabilityPath};

use crate::config::{CliError, OutputFormat, RunConfig};
use crate::emit::{format_value, Cell, ReportDocument, Table};

/// What a subcommand hands back to the dispatcher: the rendered output and
/// whether a verification suite ran and failed (exit code 1).
#[derive(Debug, Clone)]
pub struct CommandOutcome {
    pub text: String,
    pub verification_failed: bool,
}

impl CommandOutcome {
    pub fn table(text: String) -> Self {
        CommandOutcome {
            text,
            verification_failed: false,
        }
    }
}

/// Finite-difference grids for tabulation are refined to at most this
/// spacing so the derivative error stays below the reported digits.
const FISHER_PATH_SPACING: f64 = 1e-4;

/// Internal integrator step spacing for the geodesic command.
const GEODESIC_STEP: f64 = 1e-3;

pub(crate) fn render_table(cfg: &RunConfig, command: &str, table: Table) -> String {
    match cfg.format {
        OutputFormat::Csv => table.to_csv(cfg.precision),
        OutputFormat::Json => {
            let mut doc = ReportDocument::new(command, cfg);
            doc.table = Some(table.to_document(cfg.precision));
            doc.render()
        }
    }
}

/// `probabilities`: closed-form p_w = sin²u and p_⊥ = cos²u over a θ grid.
pub fn probabilities(cfg: &RunConfig) -> Result<CommandOutcome, CliError> {
    let kinds = cfg.scenario.kinds();
    let multi = kinds.len() > 1;
    let grid = linspace(0.0, cfg.theta_max, cfg.samples)?;
    let mut columns = vec!["theta", "p_w", "p_perp"];
    if multi {
        columns.insert(0, "scenario");
    }
    let mut table = Table::new(columns);
    for kind in kinds {
        let spec = cfg.spec_for(kind)?;
        let path = ProbabilityPath::sample(&spec, &grid)?;
        for i in 0..grid.len() {
            let mut row = Vec::with_capacity(4);
            if multi {
                row.push(Cell::Text(kind.name().to_string()));
            }
            row.push(Cell::Num(path.theta()[i]));
            row.push(Cell::Num(path.p_success()[i]));
            row.push(Cell::Num(path.p_failure()[i]));
            table.push(row);
        }
    }
    Ok(CommandOutcome::table(render_table(cfg, "probabilities", table)))
}

/// `fisher`: closed-form Fisher information against the finite-difference
/// route ṗ²/(p_w·p_⊥) evaluated on an internally refined probability path.
pub fn fisher(cfg: &RunConfig) -> Result<CommandOutcome, CliError> {
    let kinds = cfg.scenario.kinds();
    let multi = kinds.len() > 1;
    let spacing = cfg.theta_max / (cfg.samples - 1) as f64;
    let refine = ((spacing / FISHER_PATH_SPACING).ceil() as usize).max(1);
    // One extra coarse interval past θ_max keeps the last probe interior.
    let fine = linspace(
        0.0,
        cfg.theta_max + spacing,
        cfg.samples * refine + 1,
    )?;
    let mut columns = vec!["theta", "fisher_analytic", "fisher_numeric", "abs_deviation"];
    if multi {
        columns.insert(0, "scenario");
    }
    let mut table = Table::new(columns);
    table.header_notes.push(format!(
        "finite-difference route uses a probability path with spacing {}",
        format_value(spacing / refine as f64, 6)
    ));
    for kind in kinds {
        let spec = cfg.spec_for(kind)?;
        let path = ProbabilityPath::sample(&spec, &fine)?;
        for j in 0..cfg.samples {
            let theta = fine[j * refine];
            let analytic = fisher_analytic(&spec, theta)?;
            let numeric = fisher_numeric(&spec, &path, theta)?;
            let mut row = Vec::with_capacity(5);
            if multi {
                row.push(Cell::Text(kind.name().to_string()));
            }
            row.push(Cell::Num(theta));
            row.push(Cell::Num(analytic));
            row.push(Cell::Num(numeric));
            row.push(Cell::Num((numeric - analytic).abs()));
            table.push(row);
        }
    }
    Ok(CommandOutcome::table(render_table(cfg, "fisher", table)))
}

/// `geodesic`: closed-form curve, Runge–Kutta reintegration, entropic
/// speed, and the equation-of-motion residual over [ξ₀, ξ₀+τ].
pub fn geodesic(cfg: &RunConfig) -> Result<CommandOutcome, CliError> {
    let kinds = cfg.scenario.kinds();
    let multi = kinds.len() > 1;
    let kappa = cfg.convention().kappa();
    let mut columns = vec!["xi", "theta_closed", "theta_numeric", "speed", "ode_residual"];
    if multi {
        columns.insert(0, "scenario");
    }
    let mut table = Table::new(columns);

    for kind in kinds {
        let spec = cfg.spec_for(kind)?;
        let ic = InitialConditions::new(cfg.theta0, cfg.thetadot0, cfg.xi0)?;
        let sol = geodesic_closed_form(&spec, ic)?;
        let (_, hi) = sol.validity();
        // The residual stencil reaches 2·h beyond the last tabulated node,
        // so stop short of a finite validity boundary by a little more.
        let margin = 2.5 * RESIDUAL_STENCIL_H;
        let requested_end = cfg.xi0 + cfg.tau;
        let usable_hi = hi - margin;
        let (end, truncated) = if requested_end <= usable_hi {
            (requested_end, false)
        } else {
            (usable_hi, true)
        };
        if !(end > cfg.xi0) {
            return Err(CliError::Domain(entrogeo_core::Error::OutsideDomain {
                what: "tau (usable geodesic window)",
                value: cfg.tau,
                lo: 0.0,
                hi: usable_hi - cfg.xi0,
            }));
        }
        let coarse_spacing = (end - cfg.xi0) / (cfg.samples - 1) as f64;
        let refine = ((coarse_spacing / GEODESIC_STEP).ceil() as usize).max(1);
        let grid = linspace(cfg.xi0, end, (cfg.samples - 1) * refine + 1)?;
        let numeric = geodesic_numeric(&spec, ic, &grid)?;

        for j in 0..cfg.samples {
            let idx = j * refine;
            let xi = grid[idx];
            let theta_closed = sol.theta(xi)?;
            let theta_dot = sol.theta_dot(xi)?;
            let speed = kappa * fisher_analytic(&spec, theta_closed)?.sqrt() * theta_dot;
            let residual = ode_residual(&spec, |x| sol.theta(x), xi)?;
            let mut row = Vec::with_capacity(6);
            if multi {
                row.push(Cell::Text(kind.name().to_string()));
            }
            row.push(Cell::Num(xi));
            row.push(Cell::Num(theta_closed));
            row.push(Cell::Num(numeric.theta[idx]));
            row.push(Cell::Num(speed));
            row.push(Cell::Num(residual));
            table.push(row);
        }
        if truncated {
            table.footer_notes.push(format!(
                "{}: tabulation truncated at xi = {} (validity boundary at xi = {})",
                kind.name(),
                format_value(end, cfg.precision),
                format_value(hi, cfg.precision)
            ));
        }
    }
    Ok(CommandOutcome::table(render_table(cfg, "geodesic", table)))
}

/// `compare`: four-scenario entropic speed / entropy-production-rate /
/// efficiency report at shared parameters.
pub fn compare(cfg: &RunConfig) -> Result<CommandOutcome, CliError> {
    let params = ReportParameters {
        gamma_over_hbar: cfg.effective_gamma_over_hbar(),
        lambda: cfg.lambda,
        omega0: cfg.omega0,
        theta0: cfg.theta0,
        thetadot0: cfg.thetadot0,
        coupled_lambda: cfg.coupled_lambda,
    };
    let report = scenario_report(&params, cfg.convention(), &cfg.constants())?;
    let text = match cfg.format {
        OutputFormat::Json => {
            let mut doc = ReportDocument::new("compare", cfg);
            doc.comparison = Some(report);
            doc.render()
        }
        OutputFormat::Csv => {
            let mut table = Table::new(vec![
                "scenario",
                "label",
                "speed",
                "entropy_rate",
                "efficiency",
            ]);
            table.header_notes.push(format!(
                "kappa = {}; gamma_over_hbar = {}; lambda = {}; theta0 = {}; thetadot0 = {}",
                format_value(report.kappa, cfg.precision),
                format_value(report.gamma_over_hbar, cfg.precision),
                format_value(report.lambda, cfg.precision),
                format_value(report.theta0, cfg.precision),
                format_value(report.thetadot0, cfg.precision),
            ));
            table
                .header_notes
                .push(format!("efficiency normalizer r = {}", report.normalizer));
            for row in &report.scenarios {
                table.push(vec![
                    Cell::Text(row.kind.name().to_string()),
                    Cell::Text(row.label.clone()),
                    Cell::Num(row.speed),
                    Cell::Num(row.rate),
                    Cell::Num(row.efficiency),
                ]);
            }
            table.to_csv(cfg.precision)
        }
    };
    Ok(CommandOutcome::table(text))
}

/// `region`: scan the (λ, θ₀) square (0, 5]² and report which decaying
/// drive is faster at each grid point.
pub fn region(cfg: &RunConfig) -> Result<CommandOutcome, CliError> {
    let n = cfg.samples;
    let xstar = region_boundary();
    let mut table = Table::new(vec!["lambda", "theta0", "f_p", "exponential_faster"]);
    // The root is bisected to 1e-13, so quote 13 significant digits.
    table.header_notes.push(format!(
        "exponential drive is faster where lambda*theta0 < x_star = {}",
        format_value(xstar, 13)
    ));
    for i in 1..=n {
        let lambda = 5.0 * i as f64 / n as f64;
        for j in 1..=n {
            let theta0 = 5.0 * j as f64 / n as f64;
            let s = region_membership(lambda, theta0)?;
            table.push(vec![
                Cell::Num(lambda),
                Cell::Num(theta0),
                Cell::Num(s.f_p),
                Cell::Flag(s.exponential_faster),
            ]);
        }
    }
    Ok(CommandOutcome::table(render_table(cfg, "region", table)))
}
