//! End-to-end commands: fit, hull, 2-D plot and the theta-family sweep.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::conditioning::{min_cond, AnnealConfig};
use crate::error::{Error, Result};
use crate::fixtures::{theta_family_system, THETA_SWEEP};
use crate::io::{HullReport, ReportFile, RunSettings, Timing};
use crate::maximize::{maximize_tol, maximize_tol_exact, SolverConfig, MAX_ORTHANT_DIM};
use crate::solution_set::{check_boundedness, tss_hull, tss_polygon_2d, BoundednessStatus};
use crate::svg::{render_svg, PlotData};
use crate::tol::IntervalSystem;
use crate::variability::ive;

pub const DEFAULT_EXACT_THRESHOLD: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Use the orthant LP oracle for the fit when `n` is at most this.
    pub exact_threshold: usize,
    pub solver: SolverConfig,
    pub anneal: AnnealConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            exact_threshold: DEFAULT_EXACT_THRESHOLD,
            solver: SolverConfig::default(),
            anneal: AnnealConfig::default(),
        }
    }
}

impl RunConfig {
    fn settings(&self) -> RunSettings {
        RunSettings {
            exact_threshold: self.exact_threshold,
            anneal_restarts: self.anneal.restarts,
            anneal_steps: self.anneal.steps,
            tol_max_iters: self.solver.max_iterations,
            start: self.solver.start.clone(),
        }
    }
}

/// Fit, boundedness check, conditioning and variability.
pub fn fit_report(sys: &IntervalSystem, cfg: &RunConfig) -> Result<ReportFile> {
    let t0 = Instant::now();
    let fit = if sys.n() <= cfg.exact_threshold.min(MAX_ORTHANT_DIM) {
        maximize_tol_exact(sys)?
    } else {
        maximize_tol(sys, &cfg.solver)?
    };
    let fit_time = t0.elapsed().as_secs_f64();
    let boundedness = check_boundedness(sys)?;

    let t1 = Instant::now();
    let cond = min_cond(sys.matrix(), &cfg.anneal);
    let cond_time = t1.elapsed().as_secs_f64();
    let var = ive(&fit, &cond, sys)?;

    let mut warnings = Vec::new();
    if boundedness.status == BoundednessStatus::Unbounded {
        warnings.push(format!(
            "tolerable solution set is unbounded: point columns {:?} are linearly dependent",
            boundedness.witness.as_deref().unwrap_or_default()
        ));
    }
    if var.max_tol < 0.0 {
        warnings.push("tolerable solution set is empty; negative IVE marks the status".into());
    }
    if var.unstable {
        warnings.push("max Tol = 0: the tolerable set has empty interior and is unstable".into());
    }
    if fit.non_unique {
        warnings.push("the maximizer of Tol is not unique".into());
    }
    if !fit.converged {
        warnings.push("Tol maximization stopped at the iteration limit".into());
    }
    if var.degenerate_x_hat {
        warnings.push("estimate is the zero vector".into());
    }
    if cond.min_cond.is_infinite() {
        warnings.push("every probed matrix is singular; variability set to infinity".into());
    }

    Ok(ReportFile {
        m: sys.m(),
        n: sys.n(),
        max_tol: var.max_tol,
        x_hat: fit.x_hat,
        converged: fit.converged,
        method: fit.method,
        iterations: fit.iterations,
        non_unique: fit.non_unique,
        boundedness,
        min_cond: cond.min_cond,
        cond_seed: cond.seed,
        b_hat_norm: var.b_hat_norm,
        ive: var.ive,
        rve: var.rve,
        sqrt_factor_dim: var.sqrt_factor_dim,
        unstable: var.unstable,
        degenerate_x_hat: var.degenerate_x_hat,
        hull: None,
        warnings,
        settings: cfg.settings(),
        timing: Timing {
            fit: fit_time,
            conditioning: cond_time,
            hull: None,
            total: t0.elapsed().as_secs_f64(),
        },
    })
}

/// [`fit_report`] plus the interval hull of the tolerable set.
pub fn hull_report(sys: &IntervalSystem, cfg: &RunConfig) -> Result<ReportFile> {
    let t0 = Instant::now();
    let hull = tss_hull(sys)?;
    let hull_time = t0.elapsed().as_secs_f64();
    let mut report = fit_report(sys, cfg)?;
    report.hull = Some(HullReport {
        rad_inf_norm: hull.rad_inf_norm(),
        rad_2_norm: hull.rad_2_norm(),
        bounds: hull.0,
    });
    report.timing.hull = Some(hull_time);
    report.timing.total += hull_time;
    Ok(report)
}

/// Data for the 2-D plot; an empty set yields no polygon.
pub fn plot_data(sys: &IntervalSystem, cfg: &RunConfig) -> Result<(PlotData, ReportFile)> {
    if sys.n() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: sys.n(),
        });
    }
    let report = fit_report(sys, cfg)?;
    let polygon = if report.max_tol < 0.0 {
        Vec::new()
    } else {
        tss_polygon_2d(sys)?
    };
    let data = PlotData {
        polygon,
        x_hat: [report.x_hat[0], report.x_hat[1]],
        ive: report.ive,
        max_tol: report.max_tol,
    };
    Ok((data, report))
}

pub fn plot2d(sys: &IntervalSystem, cfg: &RunConfig) -> Result<String> {
    Ok(render_svg(&plot_data(sys, cfg)?.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    #[serde(rename = "K")]
    pub k: f64,
    pub theta: f64,
    pub max_tol: f64,
    #[serde(with = "crate::io::float")]
    pub min_cond: f64,
    #[serde(with = "crate::io::float")]
    pub ive: f64,
    pub rad_inf_norm: f64,
    pub rad_2_norm: f64,
}

/// Fit and hull of every member of the theta-family grid.
pub fn sweep(cfg: &RunConfig) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for (n, k, thetas) in THETA_SWEEP {
        for theta in thetas {
            rows.push(sweep_row(n, k, theta, cfg)?);
        }
    }
    Ok(rows)
}

pub fn sweep_row(n: usize, k: f64, theta: f64, cfg: &RunConfig) -> Result<SweepRow> {
    let report = hull_report(&theta_family_system(n, k, theta), cfg)?;
    let hull = report.hull.expect("hull_report fills the hull");
    Ok(SweepRow {
        n,
        k,
        theta,
        max_tol: report.max_tol,
        min_cond: report.min_cond,
        ive: report.ive,
        rad_inf_norm: hull.rad_inf_norm,
        rad_2_norm: hull.rad_2_norm,
    })
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)
            .map_err(|e| Error::parse(None, e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::parse(None, e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
