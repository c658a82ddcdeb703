//! Closed real intervals and the interval vector/matrix containers built on them.
//!
//! Arithmetic is plain double precision without outward rounding.

use std::fmt;
use std::ops::{Add, Deref, Index};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with `lo <= hi`. Degenerate intervals are
/// ordinary values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "[f64; 2]")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::NonFinite { lo, hi });
        }
        if lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// Builds `[mid - rad, mid + rad]`; `rad` must be nonnegative.
    pub fn from_mid_rad(mid: f64, rad: f64) -> Result<Self> {
        Self::new(mid - rad, mid + rad)
    }

    /// Builds an interval from endpoints already known to be ordered.
    pub(crate) fn new_unchecked(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "unordered endpoints [{lo}, {hi}]");
        Self { lo, hi }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    #[inline]
    pub fn rad(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    /// Largest absolute value of a point in the interval.
    #[inline]
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    #[inline]
    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    /// Interval times a real scalar.
    #[inline]
    pub fn scale(&self, t: f64) -> Self {
        if t >= 0.0 {
            Self {
                lo: self.lo * t,
                hi: self.hi * t,
            }
        } else {
            Self {
                lo: self.hi * t,
                hi: self.lo * t,
            }
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Widens (positive `c`) or narrows (negative `c`) both ends by `c`.
    pub fn inflate(&self, c: f64) -> Result<Self> {
        Self::new(self.lo - c, self.hi + c)
    }
}

impl Add for Interval {
    type Output = Interval;

    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

impl From<Interval> for [f64; 2] {
    fn from(v: Interval) -> Self {
        [v.lo, v.hi]
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Interval::new(v[0], v[1])
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let pair = <[f64; 2]>::deserialize(deserializer)?;
        Interval::try_from(pair).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Exact range of `sum_j a_j x_j` over all `a_j` in the row intervals.
pub fn row_image(row: &[Interval], x: &[f64]) -> Result<Interval> {
    if row.len() != x.len() {
        return Err(Error::DimensionMismatch {
            what: "row image",
            expected: row.len(),
            found: x.len(),
        });
    }
    Ok(row_image_unchecked(row, x))
}

#[inline]
pub(crate) fn row_image_unchecked(row: &[Interval], x: &[f64]) -> Interval {
    let (mut lo, mut hi) = (0.0, 0.0);
    for (a, &xj) in row.iter().zip(x) {
        let s = a.scale(xj);
        lo += s.lo;
        hi += s.hi;
    }
    Interval { lo, hi }
}

/// Ordered list of intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalVector(Vec<Interval>);

impl IntervalVector {
    pub fn new(comps: Vec<Interval>) -> Self {
        Self(comps)
    }

    pub fn from_bounds(bounds: &[(f64, f64)]) -> Result<Self> {
        bounds
            .iter()
            .map(|&(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn mid(&self) -> Vec<f64> {
        self.0.iter().map(Interval::mid).collect()
    }

    pub fn rad(&self) -> Vec<f64> {
        self.0.iter().map(Interval::rad).collect()
    }

    pub fn min_rad(&self) -> f64 {
        self.0.iter().map(Interval::rad).fold(f64::INFINITY, f64::min)
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        self.0.len() == x.len() && self.0.iter().zip(x).all(|(v, &xi)| v.contains(xi))
    }

    pub fn as_slice(&self) -> &[Interval] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Interval> {
        self.0
    }
}

impl Deref for IntervalVector {
    type Target = [Interval];

    fn deref(&self) -> &[Interval] {
        &self.0
    }
}

impl FromIterator<Interval> for IntervalVector {
    fn from_iter<I: IntoIterator<Item = Interval>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Dense row-major matrix of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyDimension("matrix"));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "matrix data",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                what: "matrix row",
                expected: cols,
                found: bad.len(),
            });
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Extracts the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Option<Self> {
        if cols.is_empty() {
            return None;
        }
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            data.extend(cols.iter().map(|&j| self.get(i, j)));
        }
        Some(Self {
            rows: self.rows,
            cols: cols.len(),
            data,
        })
    }
}

/// Interval `m x n` matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Interval>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyDimension("interval matrix"));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "interval matrix entries",
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Interval>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                what: "interval matrix row",
                expected: cols,
                found: bad.len(),
            });
        }
        let m = rows.len();
        Self::new(m, cols, rows.concat())
    }

    /// Builds a matrix from `(lo, hi)` pairs given row by row.
    pub fn from_bounds(rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&(lo, hi)| Interval::new(lo, hi)).collect())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn from_point(a: &Matrix) -> Self {
        Self {
            rows: a.rows(),
            cols: a.cols(),
            entries: a.data().iter().map(|&v| Interval::point(v)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Interval {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Interval] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Interval] {
        &self.entries
    }

    fn map_to_point(&self, f: impl Fn(&Interval) -> f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.entries.iter().map(f).collect(),
        }
    }

    pub fn mid(&self) -> Matrix {
        self.map_to_point(Interval::mid)
    }

    pub fn lo(&self) -> Matrix {
        self.map_to_point(Interval::lo)
    }

    pub fn hi(&self) -> Matrix {
        self.map_to_point(Interval::hi)
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// True iff the point matrix lies entrywise inside this interval matrix.
    pub fn contains_matrix(&self, a: &Matrix) -> bool {
        a.rows() == self.rows
            && a.cols() == self.cols
            && self
                .entries
                .iter()
                .zip(a.data())
                .all(|(iv, &v)| iv.contains(v))
    }

    /// Indices of columns whose entries are all degenerate.
    pub fn point_columns(&self) -> Vec<usize> {
        (0..self.cols)
            .filter(|&j| (0..self.rows).all(|i| self.get(i, j).is_degenerate()))
            .collect()
    }
}

impl Index<(usize, usize)> for IntervalMatrix {
    type Output = Interval;

    fn index(&self, (i, j): (usize, usize)) -> &Interval {
        &self.entries[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn mid_rad_mag() {
        assert_eq!(iv(190.0, 210.0).mid(), 200.0);
        assert_eq!(iv(-1.0, 1.0).mag(), 1.0);
        let eta = 0.0;
        assert_eq!(iv(1.0, 1.0 + eta).rad(), 0.0);
        assert_eq!(iv(-3.0, 2.0).mag(), 3.0);
    }

    #[test]
    fn scale_cases() {
        assert_eq!(iv(98.0, 100.0).scale(-1.0), iv(-100.0, -98.0));
        assert_eq!(iv(0.0, 2.0).scale(0.5), iv(0.0, 1.0));
        let z = iv(-1.0, 1.0).scale(0.0);
        assert_eq!((z.lo(), z.hi()), (0.0, 0.0));
    }

    #[test]
    fn rejects_inverted_and_nonfinite() {
        assert!(matches!(
            Interval::new(2.0, 1.0),
            Err(Error::InvalidInterval { .. })
        ));
        assert!(matches!(
            Interval::new(f64::NAN, 1.0),
            Err(Error::NonFinite { .. })
        ));
        assert!(serde_json::from_str::<Interval>("[3, 1]").is_err());
        assert_eq!(serde_json::from_str::<Interval>("[1, 3]").unwrap(), iv(1.0, 3.0));
    }

    #[test]
    fn row_image_examples() {
        let row = [iv(98.0, 100.0), iv(99.0, 101.0)];
        assert_eq!(row_image(&row, &[1.0, 1.0]).unwrap(), iv(197.0, 201.0));

        let row = [iv(-1.0, 1.0), iv(-1.0, 1.0)];
        assert_eq!(row_image(&row, &[0.5, -0.5]).unwrap(), iv(-1.0, 1.0));

        let img = row_image(&row, &[0.0, 0.0]).unwrap();
        assert_eq!((img.lo(), img.hi()), (0.0, 0.0));

        assert!(matches!(
            row_image(&row, &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn matrix_shape_checks() {
        assert!(IntervalMatrix::from_rows(vec![]).is_err());
        assert!(IntervalMatrix::from_rows(vec![vec![iv(0.0, 1.0)], vec![]]).is_err());
        let a = IntervalMatrix::from_bounds(&[vec![(1.0, 1.0), (0.0, 2.0)], vec![(2.0, 2.0), (3.0, 3.0)]])
            .unwrap();
        assert_eq!(a.point_columns(), vec![0]);
        assert_eq!(a.transpose().get(1, 0), iv(0.0, 2.0));
        assert!(a.contains_matrix(&a.mid()));
    }

    fn interval_strategy() -> impl Strategy<Value = Interval> {
        (-50.0..50.0f64, 0.0..20.0f64).prop_map(|(lo, w)| iv(lo, lo + w))
    }

    proptest! {
        #[test]
        fn mid_rad_reconstruct(v in interval_strategy()) {
            let tol = 1e-12 * v.mag().max(1.0);
            prop_assert!((v.mid() - v.rad() - v.lo()).abs() <= tol);
            prop_assert!((v.mid() + v.rad() - v.hi()).abs() <= tol);
            prop_assert!(v.mag() >= v.rad() && v.rad() >= 0.0);
        }

        #[test]
        fn scale_composes(v in interval_strategy(), s in -4.0..4.0f64, t in -4.0..4.0f64) {
            let a = v.scale(s * t);
            let b = v.scale(s).scale(t);
            let tol = 1e-12 * a.mag().max(1.0);
            prop_assert!((a.lo() - b.lo()).abs() <= tol && (a.hi() - b.hi()).abs() <= tol);
        }

        #[test]
        fn row_image_matches_vertex_enumeration(
            row in proptest::collection::vec(interval_strategy(), 1..=4),
            seed in proptest::collection::vec(-3.0..3.0f64, 4),
        ) {
            let x = &seed[..row.len()];
            let img = row_image(&row, x).unwrap();
            let n = row.len();
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for mask in 0..(1usize << n) {
                let s: f64 = (0..n)
                    .map(|j| if mask >> j & 1 == 1 { row[j].hi() } else { row[j].lo() } * x[j])
                    .sum();
                lo = lo.min(s);
                hi = hi.max(s);
            }
            prop_assert!((img.lo() - lo).abs() <= 1e-9);
            prop_assert!((img.hi() - hi).abs() <= 1e-9);
        }
    }
}
