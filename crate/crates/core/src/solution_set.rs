//! Geometry of the tolerable solution set
//! `{x : A x in b for every point matrix A in the interval matrix}`:
//! membership, boundedness, the interval hull and 2-D polygons.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditioning::numerical_rank;
use crate::error::{Error, Result};
use crate::interval::{row_image_unchecked, Interval, IntervalVector};
use crate::lp::{solve_lp, LpOutcome};
use crate::maximize::{check_orthant_dim, maximize_tol_split, split_program, OrthantRows};
use crate::tol::IntervalSystem;

/// Relative rank threshold used by the boundedness check.
pub const RANK_THRESHOLD: f64 = 1e-10;

/// Axis-aligned box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Box(pub IntervalVector);

impl Box {
    pub fn comps(&self) -> &[Interval] {
        &self.0
    }

    pub fn rad(&self) -> Vec<f64> {
        self.0.rad()
    }

    pub fn rad_inf_norm(&self) -> f64 {
        self.0.iter().map(Interval::rad).fold(0.0, f64::max)
    }

    pub fn rad_2_norm(&self) -> f64 {
        self.0.iter().map(|v| v.rad() * v.rad()).sum::<f64>().sqrt()
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        self.0.contains_point(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundednessStatus {
    /// Point columns exist and are linearly independent.
    Bounded,
    /// Point columns are linearly dependent.
    Unbounded,
    /// `max Tol < 0`; the question does not arise.
    EmptyTss,
    /// No column consists of point entries only, hence bounded.
    AllColumnsInterval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessVerdict {
    pub status: BoundednessStatus,
    /// For `Unbounded`: the dependent point columns.
    pub witness: Option<Vec<usize>>,
}

impl BoundednessVerdict {
    pub fn is_bounded(&self) -> bool {
        matches!(
            self.status,
            BoundednessStatus::Bounded | BoundednessStatus::AllColumnsInterval
        )
    }
}

/// `true` iff `A_i x` lies in `b_i` for every row and every `A_i` in the row
/// intervals.
pub fn tss_member(sys: &IntervalSystem, x: &[f64]) -> Result<bool> {
    if x.len() != sys.n() {
        return Err(Error::DimensionMismatch {
            what: "point",
            expected: sys.n(),
            found: x.len(),
        });
    }
    Ok(sys
        .rhs()
        .iter()
        .enumerate()
        .all(|(i, bi)| bi.contains_interval(&row_image_unchecked(sys.matrix().row(i), x))))
}

/// Boundedness criterion: a nonempty tolerable set is unbounded iff the
/// matrix has linearly dependent point (noninterval) columns. A single zero
/// point column counts as dependent.
pub fn check_boundedness(sys: &IntervalSystem) -> Result<BoundednessVerdict> {
    if maximize_tol_split(sys)?.max_tol < 0.0 {
        return Ok(BoundednessVerdict {
            status: BoundednessStatus::EmptyTss,
            witness: None,
        });
    }
    Ok(point_column_verdict(sys))
}

/// The point-column part of the criterion, without the emptiness test.
pub fn point_column_verdict(sys: &IntervalSystem) -> BoundednessVerdict {
    let cols = sys.matrix().point_columns();
    let Some(sub) = sys.matrix().mid().select_columns(&cols) else {
        return BoundednessVerdict {
            status: BoundednessStatus::AllColumnsInterval,
            witness: None,
        };
    };
    if numerical_rank(&sub, RANK_THRESHOLD) < cols.len() {
        BoundednessVerdict {
            status: BoundednessStatus::Unbounded,
            witness: Some(cols),
        }
    } else {
        BoundednessVerdict {
            status: BoundednessStatus::Bounded,
            witness: None,
        }
    }
}

fn require_bounded_nonempty(sys: &IntervalSystem) -> Result<()> {
    let max_tol = maximize_tol_split(sys)?.max_tol;
    if max_tol < 0.0 {
        return Err(Error::EmptySolutionSet { max_tol });
    }
    let verdict = point_column_verdict(sys);
    if let Some(columns) = verdict.witness {
        return Err(Error::UnboundedSolutionSet { columns });
    }
    Ok(())
}

/// Interval hull of the tolerable set: for each coordinate and direction,
/// the extreme value over every closed orthant, one LP each.
pub fn tss_hull(sys: &IntervalSystem) -> Result<Box> {
    let n = sys.n();
    check_orthant_dim(n)?;
    require_bounded_nonempty(sys)?;

    let per_orthant = (0..1usize << n)
        .into_par_iter()
        .map(|mask| orthant_extremes(sys, mask))
        .collect::<Result<Vec<_>>>()?;

    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for (l, h) in per_orthant.into_iter().flatten() {
        for k in 0..n {
            lo[k] = lo[k].min(l[k]);
            hi[k] = hi[k].max(h[k]);
        }
    }
    finish_hull(lo, hi)
}

/// Per-coordinate minima and maxima of the tolerable set within one orthant,
/// or `None` when the orthant misses the set.
fn orthant_extremes(sys: &IntervalSystem, mask: usize) -> Result<Option<(Vec<f64>, Vec<f64>)>> {
    let n = sys.n();
    let rows = OrthantRows::new(sys, mask);
    let mut lp = rows.program(sys, vec![0.0; n], false);
    if solve_lp(&lp)? == LpOutcome::Infeasible {
        return Ok(None);
    }
    let mut lo = vec![0.0; n];
    let mut hi = vec![0.0; n];
    for k in 0..n {
        for dir in [1.0, -1.0] {
            // maximize dir * x_k = dir * sign_k * y_k
            let mut obj = vec![0.0; n];
            obj[k] = dir * rows.signs[k];
            lp = rows.program(sys, obj, false);
            let value = match solve_lp(&lp)? {
                LpOutcome::Optimal { value, .. } => value,
                LpOutcome::Unbounded => {
                    return Err(Error::UnboundedSolutionSet { columns: vec![k] })
                }
                LpOutcome::Infeasible => return Ok(None),
            };
            if dir > 0.0 {
                hi[k] = value;
            } else {
                lo[k] = -value;
            }
        }
    }
    Ok(Some((lo, hi)))
}

fn finish_hull(lo: Vec<f64>, hi: Vec<f64>) -> Result<Box> {
    lo.into_iter()
        .zip(hi)
        .map(|(l, h)| {
            // round-off can cross endpoints of a degenerate component
            let (l, h) = if l > h { (0.5 * (l + h), 0.5 * (l + h)) } else { (l, h) };
            Interval::new(l, h)
        })
        .collect::<Result<IntervalVector>>()
        .map(Box)
}

/// Interval hull through the single split description `x = u - v`; two LPs
/// per coordinate and no limit on `n`.
pub fn tss_hull_split(sys: &IntervalSystem) -> Result<Box> {
    let n = sys.n();
    require_bounded_nonempty(sys)?;
    let extremes = (0..2 * n)
        .into_par_iter()
        .map(|idx| {
            let (k, dir) = (idx / 2, if idx % 2 == 0 { 1.0 } else { -1.0 });
            let mut obj = vec![0.0; 2 * n];
            obj[k] = dir;
            obj[n + k] = -dir;
            match solve_lp(&split_program(sys, obj, false))? {
                LpOutcome::Optimal { value, .. } => Ok(dir * value),
                LpOutcome::Unbounded => Err(Error::UnboundedSolutionSet { columns: vec![k] }),
                LpOutcome::Infeasible => Err(Error::EmptySolutionSet { max_tol: f64::NAN }),
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let hi = extremes.iter().step_by(2).copied().collect();
    let lo = extremes.iter().skip(1).step_by(2).copied().collect();
    finish_hull(lo, hi)
}

const VERTEX_TOL: f64 = 1e-9;

/// Vertices of the tolerable set of a 2-unknown system, counterclockwise,
/// starting from the lowest-leftmost vertex. A segment yields two vertices,
/// a single point one.
pub fn tss_polygon_2d(sys: &IntervalSystem) -> Result<Vec<[f64; 2]>> {
    if sys.n() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: sys.n(),
        });
    }
    require_bounded_nonempty(sys)?;

    let mut points: Vec<[f64; 2]> = Vec::new();
    for mask in 0..4usize {
        let rows = OrthantRows::new(sys, mask);
        // half-planes c . y <= r in y = |x|, including y >= 0
        let mut planes: Vec<([f64; 2], f64)> = vec![([-1.0, 0.0], 0.0), ([0.0, -1.0], 0.0)];
        for (i, bi) in sys.rhs().iter().enumerate() {
            planes.push(([-rows.lo[i][0], -rows.lo[i][1]], -bi.lo()));
            planes.push(([rows.hi[i][0], rows.hi[i][1]], bi.hi()));
        }
        let feasible = |y: [f64; 2]| {
            planes.iter().all(|(c, r)| {
                let scale = 1.0 + r.abs() + (c[0] * y[0]).abs() + (c[1] * y[1]).abs();
                c[0] * y[0] + c[1] * y[1] - r <= VERTEX_TOL * scale
            })
        };
        for p in 0..planes.len() {
            for q in p + 1..planes.len() {
                let ((c1, r1), (c2, r2)) = (planes[p], planes[q]);
                let det = c1[0] * c2[1] - c1[1] * c2[0];
                let norm = (c1[0].hypot(c1[1])) * (c2[0].hypot(c2[1]));
                if det.abs() <= 1e-12 * norm {
                    continue;
                }
                let y = [(r1 * c2[1] - r2 * c1[1]) / det, (c1[0] * r2 - c2[0] * r1) / det];
                if feasible(y) {
                    let x = rows.to_x(&y);
                    // + 0.0 turns -0.0 into 0.0
                    points.push([x[0] + 0.0, x[1] + 0.0]);
                }
            }
        }
    }
    Ok(convex_hull(points))
}

/// Monotone-chain convex hull; drops duplicates (within `VERTEX_TOL`) and
/// collinear points.
fn convex_hull(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut uniq: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for p in pts {
        if !uniq
            .iter()
            .any(|q| (p[0] - q[0]).abs() <= VERTEX_TOL && (p[1] - q[1]).abs() <= VERTEX_TOL)
        {
            uniq.push(p);
        }
    }
    if uniq.len() <= 2 {
        return uniq;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let scale = uniq
        .iter()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(1.0, f64::max);
    let eps = 1e-12 * scale * scale;
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &uniq {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= eps {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in uniq.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= eps {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
