//! The recognizing functional `Tol` of the tolerable solution set, its
//! supergradients, and the uniform right-hand-side shift/contraction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{row_image_unchecked, Interval, IntervalMatrix, IntervalVector, Matrix};

/// Interval linear system `A x = b` with `A` of size `m x n`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSystem {
    a: IntervalMatrix,
    b: IntervalVector,
}

impl IntervalSystem {
    pub fn new(a: IntervalMatrix, b: IntervalVector) -> Result<Self> {
        if b.len() != a.rows() {
            return Err(Error::DimensionMismatch {
                what: "right-hand side",
                expected: a.rows(),
                found: b.len(),
            });
        }
        Ok(Self { a, b })
    }

    /// System with a point matrix and interval right-hand side.
    pub fn with_point_matrix(a: &Matrix, b: IntervalVector) -> Result<Self> {
        Self::new(IntervalMatrix::from_point(a), b)
    }

    pub fn matrix(&self) -> &IntervalMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &IntervalVector {
        &self.b
    }

    /// Number of equations.
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    /// Number of unknowns.
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// Same matrix, replaced right-hand side.
    pub fn with_rhs(&self, b: IntervalVector) -> Result<Self> {
        Self::new(self.a.clone(), b)
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch {
                what: "point",
                expected: self.n(),
                found: x.len(),
            });
        }
        Ok(())
    }
}

/// Which endpoint of the row image `sum_j a_ij x_j` realizes the modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Lo,
    Hi,
}

/// Value of `Tol` at a point together with the row and endpoint attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolValue {
    pub value: f64,
    pub active_row: usize,
    pub active_endpoint: Endpoint,
}

/// Per-row compatibility `rad b_i - |mid b_i - A_i x|` and the endpoint that
/// attains the modulus (`Lo` on ties).
#[inline]
fn row_term(b: &Interval, image: Interval) -> (f64, Endpoint) {
    let from_lo = b.mid() - image.lo();
    let from_hi = image.hi() - b.mid();
    if from_lo >= from_hi {
        (b.rad() - from_lo, Endpoint::Lo)
    } else {
        (b.rad() - from_hi, Endpoint::Hi)
    }
}

pub(crate) fn tol_unchecked(sys: &IntervalSystem, x: &[f64]) -> TolValue {
    let mut best = TolValue {
        value: f64::INFINITY,
        active_row: 0,
        active_endpoint: Endpoint::Lo,
    };
    for (i, bi) in sys.b.iter().enumerate() {
        let (value, endpoint) = row_term(bi, row_image_unchecked(sys.a.row(i), x));
        if value < best.value {
            best = TolValue {
                value,
                active_row: i,
                active_endpoint: endpoint,
            };
        }
    }
    best
}

/// `Tol(x) = min_i { rad b_i - |mid b_i - sum_j a_ij x_j| }`.
///
/// Ties between rows go to the lowest index.
pub fn tol(sys: &IntervalSystem, x: &[f64]) -> Result<TolValue> {
    sys.check_point(x)?;
    Ok(tol_unchecked(sys, x))
}

/// Gradient of the affine piece of `Tol` selected by `tv` at `x`.
pub(crate) fn active_gradient(sys: &IntervalSystem, x: &[f64], tv: &TolValue) -> Vec<f64> {
    let row = sys.a.row(tv.active_row);
    row.iter()
        .zip(x)
        .map(|(a, &xj)| match tv.active_endpoint {
            // d/dx of the lower image endpoint; x_j = 0 takes the x_j >= 0 side
            Endpoint::Lo => {
                if xj >= 0.0 {
                    a.lo()
                } else {
                    a.hi()
                }
            }
            Endpoint::Hi => {
                if xj >= 0.0 {
                    -a.hi()
                } else {
                    -a.lo()
                }
            }
        })
        .collect()
}

/// A supergradient of the concave function `Tol` at `x`.
///
/// Returns the gradient of the active affine piece. At kinks this is one valid
/// element of the superdifferential, chosen by the lowest-row, `Lo`-first,
/// `x_j >= 0`-side rule so results are reproducible.
pub fn tol_subgradient(sys: &IntervalSystem, x: &[f64]) -> Result<Vec<f64>> {
    sys.check_point(x)?;
    let tv = tol_unchecked(sys, x);
    Ok(active_gradient(sys, x, &tv))
}

/// Expands every right-hand component by `[-c, c]` (narrows when `c < 0`).
/// `Tol` at every point increases by exactly `c`.
pub fn shift_rhs(sys: &IntervalSystem, c: f64) -> Result<IntervalSystem> {
    let min_rad = sys.b.min_rad();
    if c < -min_rad {
        return Err(Error::ShiftTooNegative { shift: c, min_rad });
    }
    let b = sys
        .b
        .iter()
        .map(|bi| {
            // clamp the rounding overshoot when c == -rad b_i
            let lo = bi.lo() - c;
            let hi = bi.hi() + c;
            if lo > hi {
                let m = bi.mid();
                Interval::new_unchecked(m, m)
            } else {
                Interval::new_unchecked(lo, hi)
            }
        })
        .collect();
    sys.with_rhs(b)
}

/// Uniformly compresses the right-hand side: `[lo_i + amount, hi_i - amount]`.
pub fn contract_rhs(sys: &IntervalSystem, amount: f64) -> Result<IntervalSystem> {
    let min_rad = sys.b.min_rad();
    if !(0.0..=min_rad).contains(&amount) {
        return Err(Error::ContractionOutOfRange { amount, min_rad });
    }
    shift_rhs(sys, -amount)
}
