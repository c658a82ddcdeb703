//! Maximization of the recognizing functional: the maximum compatibility
//! estimate `x_hat = argmax Tol` and the value `M = max Tol`.
//!
//! Two routes are provided. [`maximize_tol`] is a nonsmooth ascent method
//! (Shor's r-algorithm with space dilation along the difference of successive
//! supergradients, or a plain supergradient method). [`maximize_tol_exact`]
//! enumerates the closed orthants of `x`, on each of which `Tol` is the
//! minimum of finitely many affine functions, and solves one LP per orthant.
//! [`maximize_tol_split`] solves a single LP over the split `x = u - v`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, LpOutcome, VarBounds};
use crate::tol::{active_gradient, tol_unchecked, IntervalSystem};

/// Largest `n` accepted by orthant enumeration.
pub const MAX_ORTHANT_DIM: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    Ascent,
    ExactOracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AscentMethod {
    /// r-algorithm with adaptive step and space dilation.
    RAlgorithm,
    /// Supergradient steps: Polyak steps toward `target` when set, otherwise
    /// diminishing `h0 / sqrt(k + 1)` steps.
    Supergradient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Starting point; `None` means the zero vector.
    pub start: Option<Vec<f64>>,
    pub method: AscentMethod,
    /// Stop when a whole iteration moved `x` less than this.
    pub step_tol: f64,
    /// Stop when the best value improved by less than this over the last
    /// `stall_window` iterations.
    pub improvement_tol: f64,
    pub stall_window: usize,
    pub max_iterations: usize,
    /// Initial step length.
    pub initial_step: f64,
    /// Space dilation coefficient of the r-algorithm (> 1).
    pub dilation: f64,
    /// Known (or estimated) optimal value for Polyak steps.
    pub target: Option<f64>,
    /// Record the best-so-far value after every iteration.
    pub record_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            start: None,
            method: AscentMethod::RAlgorithm,
            step_tol: 1e-10,
            improvement_tol: 1e-12,
            stall_window: 30,
            max_iterations: 20_000,
            initial_step: 1.0,
            dilation: 2.3,
            target: None,
            record_trace: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// `M = max Tol`.
    pub max_tol: f64,
    /// `x_hat = argmax Tol`.
    pub x_hat: Vec<f64>,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub method: FitMethod,
    /// Set by the exact oracle when two orthants attain `M` at distinct points.
    pub non_unique: bool,
    /// Best-so-far value per iteration, when requested.
    pub trace: Vec<f64>,
}

impl FitResult {
    /// The tolerable solution set is nonempty iff `M >= 0`.
    pub fn is_compatible(&self) -> bool {
        self.max_tol >= 0.0
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Tracker<'a> {
    sys: &'a IntervalSystem,
    best_x: Vec<f64>,
    best_f: f64,
    evaluations: usize,
}

impl<'a> Tracker<'a> {
    /// Evaluates `Tol` and a supergradient at `x`, updating the incumbent.
    fn eval(&mut self, x: &[f64]) -> (f64, Vec<f64>) {
        self.evaluations += 1;
        let tv = tol_unchecked(self.sys, x);
        if tv.value > self.best_f {
            self.best_f = tv.value;
            self.best_x.copy_from_slice(x);
        }
        (tv.value, active_gradient(self.sys, x, &tv))
    }
}

/// Maximizes `Tol` by a nonsmooth ascent method.
pub fn maximize_tol(sys: &IntervalSystem, cfg: &SolverConfig) -> Result<FitResult> {
    let n = sys.n();
    let x0 = match &cfg.start {
        Some(s) if s.len() != n => {
            return Err(Error::DimensionMismatch {
                what: "start point",
                expected: n,
                found: s.len(),
            })
        }
        Some(s) => s.clone(),
        None => vec![0.0; n],
    };
    let mut tracker = Tracker {
        sys,
        best_x: x0.clone(),
        best_f: f64::NEG_INFINITY,
        evaluations: 0,
    };
    let (iterations, converged, trace) = match cfg.method {
        AscentMethod::RAlgorithm => r_algorithm(&mut tracker, x0, cfg),
        AscentMethod::Supergradient => supergradient(&mut tracker, x0, cfg),
    };
    Ok(FitResult {
        max_tol: tracker.best_f,
        x_hat: tracker.best_x,
        iterations,
        evaluations: tracker.evaluations,
        converged,
        method: FitMethod::Ascent,
        non_unique: false,
        trace,
    })
}

/// Shor's r-algorithm in the variant with adaptive step control, applied to
/// the convex function `-Tol`.
fn r_algorithm(tr: &mut Tracker<'_>, mut x: Vec<f64>, cfg: &SolverConfig) -> (usize, bool, Vec<f64>) {
    let n = x.len();
    let w = 1.0 / cfg.dilation - 1.0;
    let (q1, q2, nh) = (0.9, 1.1, 3);
    let max_line_steps = 500;

    // B is the n x n space transformation, row-major.
    let mut b = vec![0.0; n * n];
    for i in 0..n {
        b[i * n + i] = 1.0;
    }
    let bt_mul = |b: &[f64], v: &[f64]| -> Vec<f64> {
        (0..n).map(|j| (0..n).map(|i| b[i * n + j] * v[i]).sum()).collect()
    };
    let b_mul = |b: &[f64], v: &[f64]| -> Vec<f64> {
        (0..n).map(|i| dot(&b[i * n..(i + 1) * n], v)).collect()
    };

    let mut trace = Vec::new();
    let (_, sg) = tr.eval(&x);
    // gradient of the minimized function -Tol
    let mut g0: Vec<f64> = sg.iter().map(|v| -v).collect();
    if norm2(&g0) == 0.0 {
        return (0, true, trace);
    }
    let mut hs = cfg.initial_step;
    let mut improvements = vec![f64::INFINITY; cfg.stall_window.max(1)];
    let mut last_best = tr.best_f;

    for itn in 1..=cfg.max_iterations {
        let g1 = bt_mul(&b, &g0);
        let g1n = norm2(&g1);
        if g1n == 0.0 {
            return (itn, true, trace);
        }
        let dir: Vec<f64> = g1.iter().map(|v| v / g1n).collect();
        let dx = b_mul(&b, &dir);
        let dx_norm = norm2(&dx);

        let mut moved = 0.0;
        let mut steps = 0;
        let mut g_new;
        loop {
            for (xi, d) in x.iter_mut().zip(&dx) {
                *xi -= hs * d;
            }
            moved += hs * dx_norm;
            steps += 1;
            let (_, sg) = tr.eval(&x);
            g_new = sg.iter().map(|v| -v).collect::<Vec<f64>>();
            if steps % nh == 0 {
                hs *= q2;
            }
            if dot(&dx, &g_new) <= 0.0 || steps > max_line_steps {
                break;
            }
        }
        if steps == 1 {
            hs *= q1;
        }
        if cfg.record_trace {
            trace.push(tr.best_f);
        }

        if moved < cfg.step_tol {
            return (itn, true, trace);
        }

        let diff: Vec<f64> = g_new.iter().zip(&g0).map(|(a, b)| a - b).collect();
        let dg = bt_mul(&b, &diff);
        let dg_norm = norm2(&dg);
        if dg_norm > 0.0 {
            let xi: Vec<f64> = dg.iter().map(|v| v / dg_norm).collect();
            let bxi = b_mul(&b, &xi);
            for i in 0..n {
                for j in 0..n {
                    b[i * n + j] += w * bxi[i] * xi[j];
                }
            }
        }
        g0 = g_new;
        if norm2(&g0) == 0.0 {
            return (itn, true, trace);
        }

        improvements.rotate_right(1);
        improvements[0] = (tr.best_f - last_best).abs();
        last_best = tr.best_f;
        let window: f64 = improvements.iter().sum();
        let scale = tr.best_f.abs().max(1.0);
        if window / scale < cfg.improvement_tol {
            return (itn, true, trace);
        }
    }
    (cfg.max_iterations, false, trace)
}

fn supergradient(tr: &mut Tracker<'_>, mut x: Vec<f64>, cfg: &SolverConfig) -> (usize, bool, Vec<f64>) {
    let mut trace = Vec::new();
    let mut improvements = vec![f64::INFINITY; cfg.stall_window.max(1)];
    let mut last_best = f64::NEG_INFINITY;
    for k in 0..cfg.max_iterations {
        let (f, g) = tr.eval(&x);
        let gn = norm2(&g);
        if cfg.record_trace {
            trace.push(tr.best_f);
        }
        if gn == 0.0 {
            return (k + 1, true, trace);
        }
        let step = match cfg.target {
            Some(t) => (t - f).max(0.0) / gn,
            None => cfg.initial_step / ((k + 1) as f64).sqrt(),
        };
        if step * 1.0 < cfg.step_tol {
            return (k + 1, true, trace);
        }
        for (xi, gi) in x.iter_mut().zip(&g) {
            *xi += step * gi / gn;
        }
        improvements.rotate_right(1);
        improvements[0] = if last_best.is_finite() {
            (tr.best_f - last_best).abs()
        } else {
            f64::INFINITY
        };
        last_best = tr.best_f;
        if improvements.iter().sum::<f64>() / tr.best_f.abs().max(1.0) < cfg.improvement_tol {
            return (k + 1, true, trace);
        }
    }
    (cfg.max_iterations, false, trace)
}

/// Coefficients of the lower and upper row-image endpoints on the closed
/// orthant `{x : sign_j * x_j >= 0}` in the variables `y = |x|`.
pub(crate) struct OrthantRows {
    pub signs: Vec<f64>,
    /// For each row: coefficients of `lo(A_i x)` in `y`.
    pub lo: Vec<Vec<f64>>,
    /// For each row: coefficients of `hi(A_i x)` in `y`.
    pub hi: Vec<Vec<f64>>,
}

impl OrthantRows {
    pub fn new(sys: &IntervalSystem, mask: usize) -> Self {
        let n = sys.n();
        let signs: Vec<f64> = (0..n)
            .map(|j| if mask >> j & 1 == 1 { -1.0 } else { 1.0 })
            .collect();
        let a = sys.matrix();
        let mut lo = Vec::with_capacity(sys.m());
        let mut hi = Vec::with_capacity(sys.m());
        for i in 0..sys.m() {
            let row = a.row(i);
            lo.push(
                row.iter()
                    .zip(&signs)
                    .map(|(e, &s)| if s > 0.0 { e.lo() } else { -e.hi() })
                    .collect(),
            );
            hi.push(
                row.iter()
                    .zip(&signs)
                    .map(|(e, &s)| if s > 0.0 { e.hi() } else { -e.lo() })
                    .collect(),
            );
        }
        Self { signs, lo, hi }
    }

    /// LP over `(y, t)` with `y >= 0` and the constraints
    /// `t - lo(A_i x) <= -lo(b_i)`, `t + hi(A_i x) <= hi(b_i)`.
    /// With `t` fixed to zero these describe membership in the tolerable set.
    pub fn program(&self, sys: &IntervalSystem, objective: Vec<f64>, with_t: bool) -> LinearProgram {
        let n = self.signs.len();
        let dim = if with_t { n + 1 } else { n };
        debug_assert_eq!(objective.len(), dim);
        let mut lp = LinearProgram::maximize(objective);
        for j in 0..n {
            lp.set_bounds(j, VarBounds::NONNEGATIVE).expect("index in range");
        }
        for (i, bi) in sys.rhs().iter().enumerate() {
            let mut lo_row: Vec<f64> = self.lo[i].iter().map(|v| -v).collect();
            let mut hi_row = self.hi[i].clone();
            if with_t {
                lo_row.push(1.0);
                hi_row.push(1.0);
            }
            lp.add_constraint(lo_row, -bi.lo()).expect("row length matches");
            lp.add_constraint(hi_row, bi.hi()).expect("row length matches");
        }
        lp
    }

    pub fn to_x(&self, y: &[f64]) -> Vec<f64> {
        y.iter().zip(&self.signs).map(|(v, s)| v * s).collect()
    }
}

pub(crate) fn check_orthant_dim(n: usize) -> Result<()> {
    if n > MAX_ORTHANT_DIM {
        return Err(Error::TooManyUnknowns {
            n,
            limit: MAX_ORTHANT_DIM,
        });
    }
    Ok(())
}

/// Exact `max Tol` by one LP per closed orthant.
pub fn maximize_tol_exact(sys: &IntervalSystem) -> Result<FitResult> {
    let n = sys.n();
    check_orthant_dim(n)?;
    let optima = (0..1usize << n)
        .into_par_iter()
        .map(|mask| {
            let rows = OrthantRows::new(sys, mask);
            let mut obj = vec![0.0; n + 1];
            obj[n] = 1.0;
            match solve_lp(&rows.program(sys, obj, true))? {
                LpOutcome::Optimal { point, value } => Ok(Some((value, rows.to_x(&point[..n])))),
                // t is bounded above by min rad b_i and the LP is always feasible
                LpOutcome::Infeasible | LpOutcome::Unbounded => Ok(None),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best: Option<(f64, Vec<f64>)> = None;
    for (v, x) in optima.iter().flatten() {
        if best.as_ref().is_none_or(|(bv, _)| v > bv) {
            best = Some((*v, x.clone()));
        }
    }
    let (lp_value, x_lp) = best.expect("at least one orthant LP is feasible");
    let non_unique = optima.iter().flatten().any(|(v, x)| {
        *v >= lp_value - 1e-9
            && x.iter().zip(&x_lp).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) > 1e-6
    });
    // report the functional itself at the LP optimizer
    let max_tol = tol_unchecked(sys, &x_lp).value;
    Ok(FitResult {
        max_tol,
        x_hat: x_lp,
        iterations: 1 << n,
        evaluations: 1,
        converged: true,
        method: FitMethod::ExactOracle,
        non_unique,
        trace: Vec::new(),
    })
}

/// Exact `max Tol` by a single LP over the split `x = u - v`, `u, v >= 0`:
/// `t + hi(A) u - lo(A) v <= hi(b)` and `t - lo(A) u + hi(A) v <= -lo(b)`.
/// For every `t` the projection onto `x` is exactly `{x : Tol(x) >= t}`.
pub fn maximize_tol_split(sys: &IntervalSystem) -> Result<FitResult> {
    let n = sys.n();
    let mut obj = vec![0.0; 2 * n + 1];
    obj[2 * n] = 1.0;
    let lp = split_program(sys, obj, true);
    let (point, _) = match solve_lp(&lp)? {
        LpOutcome::Optimal { point, value } => (point, value),
        other => unreachable!("split LP is feasible and bounded, got {other:?}"),
    };
    let x: Vec<f64> = (0..n).map(|j| point[j] - point[n + j]).collect();
    Ok(FitResult {
        max_tol: tol_unchecked(sys, &x).value,
        x_hat: x,
        iterations: 1,
        evaluations: 1,
        converged: true,
        method: FitMethod::ExactOracle,
        non_unique: false,
        trace: Vec::new(),
    })
}

/// Linear description over `(u, v[, t])` of `{x = u - v : Tol(x) >= t}`.
pub(crate) fn split_program(sys: &IntervalSystem, objective: Vec<f64>, with_t: bool) -> LinearProgram {
    let n = sys.n();
    let a = sys.matrix();
    let mut lp = LinearProgram::maximize(objective);
    for j in 0..2 * n {
        lp.set_bounds(j, VarBounds::NONNEGATIVE).expect("index in range");
    }
    for (i, bi) in sys.rhs().iter().enumerate() {
        let row = a.row(i);
        let mut upper: Vec<f64> = row.iter().map(|e| e.hi()).chain(row.iter().map(|e| -e.lo())).collect();
        let mut lower: Vec<f64> = row.iter().map(|e| -e.lo()).chain(row.iter().map(|e| e.hi())).collect();
        if with_t {
            upper.push(1.0);
            lower.push(1.0);
        }
        lp.add_constraint(upper, bi.hi()).expect("row length matches");
        lp.add_constraint(lower, -bi.lo()).expect("row length matches");
    }
    lp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::interval::{IntervalVector, Matrix};
    use crate::tol::tol;

    #[test]
    fn three_by_two_ascent() {
        let sys = fixtures::three_by_two_system();
        let fit = maximize_tol(&sys, &SolverConfig::default()).unwrap();
        assert!((fit.max_tol - 1.9095).abs() < 1e-3, "{fit:?}");
        assert!((fit.x_hat[0] - 5.1857e-7).abs() < 1e-2);
        assert!((fit.x_hat[1] - 2.0603).abs() < 1e-2);
        assert!(fit.converged);
        let exact = maximize_tol_exact(&sys).unwrap();
        assert!((exact.max_tol - fit.max_tol).abs() < 1e-6, "{} vs {}", exact.max_tol, fit.max_tol);
    }

    #[test]
    fn two_by_three_ascent() {
        let sys = fixtures::two_by_three_system();
        let fit = maximize_tol(&sys, &SolverConfig::default()).unwrap();
        assert!((fit.max_tol - 3.9698).abs() < 1e-3, "{fit:?}");
        assert!((fit.x_hat[0] - 2.0603).abs() < 1e-2);
        assert!(fit.x_hat[1].abs() < 1e-2 && fit.x_hat[2].abs() < 1e-2);
    }

    #[test]
    fn symmetric_identity() {
        let sys = IntervalSystem::with_point_matrix(
            &Matrix::identity(2),
            IntervalVector::from_bounds(&[(-1.0, 1.0), (-1.0, 1.0)]).unwrap(),
        )
        .unwrap();
        for fit in [
            maximize_tol(&sys, &SolverConfig::default()).unwrap(),
            maximize_tol_exact(&sys).unwrap(),
            maximize_tol_split(&sys).unwrap(),
        ] {
            assert!((fit.max_tol - 1.0).abs() < 1e-9);
            assert!(fit.x_hat.iter().all(|v| v.abs() < 1e-9));
        }
    }

    #[test]
    fn unstable_segment_has_zero_max() {
        for eta in [0.0, 0.1, 1.0] {
            let sys = fixtures::unstable_segment_system(eta);
            let exact = maximize_tol_exact(&sys).unwrap();
            assert!(exact.max_tol.abs() < 1e-9, "eta {eta}: {exact:?}");
            let x = &exact.x_hat;
            // optimizer lies on the segment x1 - x2 = 1, |x1| + |x2| = 1
            assert!((x[0] - x[1] - 1.0).abs() < 1e-9 && x[0] >= -1e-9 && x[1] <= 1e-9);

            let fit = maximize_tol(&sys, &SolverConfig::default()).unwrap();
            assert!(fit.max_tol.abs() < 1e-9, "eta {eta}: {fit:?}");
            assert!(tol(&sys, &[0.5, -0.5]).unwrap().value.abs() < 1e-15);
        }
    }

    #[test]
    fn supergradient_variant_with_polyak_target() {
        // plain supergradient steps are only practical on well-conditioned data
        let sys = fixtures::theta_family_system(5, 10.0, 10.0);
        let cfg = SolverConfig {
            method: AscentMethod::Supergradient,
            target: Some(maximize_tol_exact(&sys).unwrap().max_tol),
            max_iterations: 50_000,
            record_trace: true,
            ..SolverConfig::default()
        };
        let fit = maximize_tol(&sys, &cfg).unwrap();
        assert!((fit.max_tol - cfg.target.unwrap()).abs() < 1e-3, "{}", fit.max_tol);
        assert!(fit.trace.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn trace_is_monotone() {
        let sys = fixtures::two_by_three_system();
        let cfg = SolverConfig {
            record_trace: true,
            ..SolverConfig::default()
        };
        let fit = maximize_tol(&sys, &cfg).unwrap();
        assert!(!fit.trace.is_empty());
        assert!(fit.trace.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn iteration_cap_clears_converged() {
        let sys = fixtures::three_by_two_system();
        let cfg = SolverConfig {
            max_iterations: 2,
            ..SolverConfig::default()
        };
        let fit = maximize_tol(&sys, &cfg).unwrap();
        assert!(!fit.converged);
        assert_eq!(fit.iterations, 2);
    }

    #[test]
    fn start_point_dimension_checked() {
        let sys = fixtures::three_by_two_system();
        let cfg = SolverConfig {
            start: Some(vec![1.0]),
            ..SolverConfig::default()
        };
        assert!(maximize_tol(&sys, &cfg).is_err());
    }

    #[test]
    fn exact_oracle_rejects_large_n() {
        let n = MAX_ORTHANT_DIM + 1;
        let sys = IntervalSystem::with_point_matrix(
            &Matrix::identity(n),
            IntervalVector::from_bounds(&vec![(-1.0, 1.0); n]).unwrap(),
        )
        .unwrap();
        assert!(matches!(maximize_tol_exact(&sys), Err(Error::TooManyUnknowns { .. })));
        // the split LP has no such limit
        assert!((maximize_tol_split(&sys).unwrap().max_tol - 1.0).abs() < 1e-9);
    }

    #[test]
    fn non_unique_optimum_is_flagged() {
        // the whole segment (0,-1)-(1,0) attains max Tol = 0 and it crosses orthants
        let seg = maximize_tol_exact(&fixtures::unstable_segment_system(0.0)).unwrap();
        assert!(seg.non_unique);
        let unique = maximize_tol_exact(&fixtures::three_by_two_system()).unwrap();
        assert!(!unique.non_unique);
    }
}
