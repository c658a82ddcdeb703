//! Dense two-phase primal simplex for small linear programs.
//!
//! Problems are stated as `maximize c'y` subject to `a_k'y <= r_k` with optional
//! per-variable bounds; variables without bounds are free. Pivoting uses
//! Dantzig's rule and falls back to Bland's rule once too many degenerate
//! pivots have been taken.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-11;
const DEGENERATE_LIMIT: usize = 500;
const DEFAULT_MAX_ITERATIONS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VarBounds {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl VarBounds {
    pub const FREE: VarBounds = VarBounds {
        lower: None,
        upper: None,
    };
    pub const NONNEGATIVE: VarBounds = VarBounds {
        lower: Some(0.0),
        upper: None,
    };
    pub const NONPOSITIVE: VarBounds = VarBounds {
        lower: None,
        upper: Some(0.0),
    };
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
    bounds: Vec<VarBounds>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { point: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<(&[f64], f64)> {
        match self {
            LpOutcome::Optimal { point, value } => Some((point, *value)),
            _ => None,
        }
    }
}

impl LinearProgram {
    /// New program maximizing `objective' y` over free variables.
    pub fn maximize(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            objective,
            constraints: Vec::new(),
            bounds: vec![VarBounds::FREE; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn bounds(&self) -> &[VarBounds] {
        &self.bounds
    }

    /// Adds `coeffs' y <= rhs`.
    pub fn add_constraint(&mut self, coeffs: Vec<f64>, rhs: f64) -> Result<&mut Self> {
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                what: "LP constraint",
                expected: self.dim(),
                found: coeffs.len(),
            });
        }
        self.constraints.push(Constraint { coeffs, rhs });
        Ok(self)
    }

    pub fn set_bounds(&mut self, var: usize, bounds: VarBounds) -> Result<&mut Self> {
        let n = self.dim();
        let slot = self.bounds.get_mut(var).ok_or(Error::DimensionMismatch {
            what: "LP variable index",
            expected: n,
            found: var,
        })?;
        *slot = bounds;
        Ok(self)
    }

    /// Largest violation of any constraint or bound at `y` (0 when feasible).
    pub fn max_violation(&self, y: &[f64]) -> f64 {
        let rows = self.constraints.iter().map(|c| {
            let lhs: f64 = c.coeffs.iter().zip(y).map(|(a, b)| a * b).sum();
            lhs - c.rhs
        });
        let bounds = self.bounds.iter().zip(y).flat_map(|(b, &v)| {
            [b.lower.map_or(f64::NEG_INFINITY, |l| l - v), b.upper.map_or(f64::NEG_INFINITY, |u| v - u)]
        });
        rows.chain(bounds).fold(0.0, f64::max)
    }
}

/// How an original variable is expressed through nonnegative columns:
/// `y = offset + sum(coef * p[col])`.
#[derive(Debug, Clone)]
struct VarMap {
    offset: f64,
    terms: Vec<(usize, f64)>,
}

struct Tableau {
    /// Row-major `rows x (cols + 1)`, last column is the right-hand side.
    t: Vec<f64>,
    rows: usize,
    cols: usize,
    basis: Vec<usize>,
    obj: Vec<f64>,
    obj_value: f64,
    allowed: Vec<bool>,
    iterations: usize,
    degenerate: usize,
    max_iterations: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

impl Tableau {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * (self.cols + 1) + j]
    }

    #[inline]
    fn rhs(&self, i: usize) -> f64 {
        self.t[i * (self.cols + 1) + self.cols]
    }

    fn set_objective(&mut self, c: &[f64]) {
        self.obj = c.to_vec();
        self.obj_value = 0.0;
        for i in 0..self.rows {
            let cb = c[self.basis[i]];
            if cb != 0.0 {
                for j in 0..self.cols {
                    self.obj[j] -= cb * self.at(i, j);
                }
                self.obj_value += cb * self.rhs(i);
            }
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let w = self.cols + 1;
        let p = self.at(r, e);
        for v in &mut self.t[r * w..(r + 1) * w] {
            *v /= p;
        }
        let pivot_row: Vec<f64> = self.t[r * w..(r + 1) * w].to_vec();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.at(i, e);
            if f != 0.0 {
                let row = &mut self.t[i * w..(i + 1) * w];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[e] = 0.0;
            }
        }
        let f = self.obj[e];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.obj[e] = 0.0;
            self.obj_value += f * pivot_row[self.cols];
        }
        self.basis[r] = e;
    }

    fn run(&mut self) -> Result<PhaseEnd> {
        loop {
            let bland = self.degenerate > DEGENERATE_LIMIT;
            let entering = if bland {
                (0..self.cols).find(|&j| self.allowed[j] && self.obj[j] > COST_EPS)
            } else {
                (0..self.cols)
                    .filter(|&j| self.allowed[j] && self.obj[j] > COST_EPS)
                    .max_by(|&a, &b| self.obj[a].total_cmp(&self.obj[b]))
            };
            let Some(e) = entering else {
                return Ok(PhaseEnd::Optimal);
            };

            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.at(i, e);
                if a <= PIVOT_EPS {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        let tie = (ratio - best).abs() <= 1e-12 * best.abs().max(1.0);
                        let better = if tie {
                            if bland {
                                self.basis[i] < self.basis[k]
                            } else {
                                a > self.at(k, e)
                            }
                        } else {
                            ratio < best
                        };
                        if better {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
            let Some((r, ratio)) = leave else {
                return Ok(PhaseEnd::Unbounded);
            };

            self.iterations += 1;
            if self.iterations > self.max_iterations {
                return Err(Error::IterationLimit(self.max_iterations));
            }
            if ratio <= PIVOT_EPS {
                self.degenerate += 1;
            }
            self.pivot(r, e);
        }
    }

    fn remove_row(&mut self, r: usize) {
        let w = self.cols + 1;
        self.t.drain(r * w..(r + 1) * w);
        self.basis.remove(r);
        self.rows -= 1;
    }
}

/// Solves the program with the default iteration cap.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome> {
    solve_lp_with_limit(lp, DEFAULT_MAX_ITERATIONS)
}

pub fn solve_lp_with_limit(lp: &LinearProgram, max_iterations: usize) -> Result<LpOutcome> {
    let n = lp.dim();
    if lp.bounds.len() != n {
        return Err(Error::DimensionMismatch {
            what: "LP bounds",
            expected: n,
            found: lp.bounds.len(),
        });
    }
    for c in &lp.constraints {
        if c.coeffs.len() != n {
            return Err(Error::DimensionMismatch {
                what: "LP constraint",
                expected: n,
                found: c.coeffs.len(),
            });
        }
    }

    // Rewrite every variable through nonnegative columns.
    let mut maps = Vec::with_capacity(n);
    let mut extra_rows: Vec<(usize, f64)> = Vec::new();
    let mut ncols = 0;
    for b in &lp.bounds {
        let map = match (b.lower, b.upper) {
            (Some(l), upper) => {
                if let Some(u) = upper {
                    if u < l {
                        return Ok(LpOutcome::Infeasible);
                    }
                    extra_rows.push((ncols, u - l));
                }
                ncols += 1;
                VarMap {
                    offset: l,
                    terms: vec![(ncols - 1, 1.0)],
                }
            }
            (None, Some(u)) => {
                ncols += 1;
                VarMap {
                    offset: u,
                    terms: vec![(ncols - 1, -1.0)],
                }
            }
            (None, None) => {
                ncols += 2;
                VarMap {
                    offset: 0.0,
                    terms: vec![(ncols - 2, 1.0), (ncols - 1, -1.0)],
                }
            }
        };
        maps.push(map);
    }
    let structural = ncols;

    let mut rows: Vec<(Vec<f64>, f64)> = Vec::with_capacity(lp.constraints.len() + extra_rows.len());
    for c in &lp.constraints {
        let mut coeffs = vec![0.0; structural];
        let mut rhs = c.rhs;
        for (a, map) in c.coeffs.iter().zip(&maps) {
            if *a == 0.0 {
                continue;
            }
            rhs -= a * map.offset;
            for &(col, coef) in &map.terms {
                coeffs[col] += a * coef;
            }
        }
        rows.push((coeffs, rhs));
    }
    for (col, ub) in extra_rows {
        let mut coeffs = vec![0.0; structural];
        coeffs[col] = 1.0;
        rows.push((coeffs, ub));
    }

    let mut cost = vec![0.0; structural];
    for (c, map) in lp.objective.iter().zip(&maps) {
        for &(col, coef) in &map.terms {
            cost[col] += c * coef;
        }
    }

    // Columns: structural | slacks | artificials.
    let m = rows.len();
    let n_art = rows.iter().filter(|(_, r)| *r < 0.0).count();
    let cols = structural + m + n_art;
    let w = cols + 1;
    let mut t = vec![0.0; m * w];
    let mut basis = vec![0; m];
    let mut art = structural + m;
    for (i, (coeffs, rhs)) in rows.iter().enumerate() {
        let sign = if *rhs < 0.0 { -1.0 } else { 1.0 };
        let row = &mut t[i * w..(i + 1) * w];
        for (dst, v) in row.iter_mut().zip(coeffs) {
            *dst = sign * v;
        }
        row[structural + i] = sign;
        row[cols] = sign * rhs;
        if sign < 0.0 {
            row[art] = 1.0;
            basis[i] = art;
            art += 1;
        } else {
            basis[i] = structural + i;
        }
    }

    let mut tab = Tableau {
        t,
        rows: m,
        cols,
        basis,
        obj: vec![0.0; cols],
        obj_value: 0.0,
        allowed: vec![true; cols],
        iterations: 0,
        degenerate: 0,
        max_iterations,
    };

    if n_art > 0 {
        let mut phase1 = vec![0.0; cols];
        for v in &mut phase1[structural + m..] {
            *v = -1.0;
        }
        tab.set_objective(&phase1);
        tab.run()?;
        let scale = 1.0 + rows.iter().map(|(_, r)| r.abs()).fold(0.0, f64::max);
        if tab.obj_value < -1e-9 * scale {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < tab.rows {
            if tab.basis[i] >= structural + m {
                let j = (0..structural + m)
                    .filter(|&j| tab.at(i, j).abs() > 1e-9)
                    .max_by(|&a, &b| tab.at(i, a).abs().total_cmp(&tab.at(i, b).abs()));
                match j {
                    Some(j) => {
                        tab.pivot(i, j);
                        i += 1;
                    }
                    None => tab.remove_row(i),
                }
            } else {
                i += 1;
            }
        }
        for a in &mut tab.allowed[structural + m..] {
            *a = false;
        }
        tab.degenerate = 0;
    }

    let mut phase2 = vec![0.0; cols];
    phase2[..structural].copy_from_slice(&cost);
    tab.set_objective(&phase2);
    if let PhaseEnd::Unbounded = tab.run()? {
        return Ok(LpOutcome::Unbounded);
    }

    let mut p = vec![0.0; cols];
    for i in 0..tab.rows {
        p[tab.basis[i]] = tab.rhs(i).max(0.0);
    }
    let point: Vec<f64> = maps
        .iter()
        .map(|map| map.offset + map.terms.iter().map(|&(col, coef)| coef * p[col]).sum::<f64>())
        .collect();
    let value = lp.objective.iter().zip(&point).map(|(c, y)| c * y).sum();
    Ok(LpOutcome::Optimal { point, value })
}
