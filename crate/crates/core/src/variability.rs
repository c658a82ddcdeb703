//! Size measures of the estimate's uncertainty: the interval variability
//! (IVE) and the relative variability (RVE).

use serde::{Deserialize, Serialize};

use crate::conditioning::CondResult;
use crate::error::{Error, Result};
use crate::interval::IntervalVector;
use crate::maximize::FitResult;
use crate::tol::IntervalSystem;

/// `|M|` at or below this multiple of `max(1, max rad b)` is treated as an
/// exact zero, i.e. an unstable tolerable set.
pub const ZERO_TOL_REL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariabilityReport {
    pub b_hat: Vec<f64>,
    pub b_hat_norm: f64,
    /// Signed: negative when the tolerable set is empty.
    #[serde(with = "crate::io::float")]
    pub ive: f64,
    #[serde(with = "crate::io::float")]
    pub abs_ive: f64,
    #[serde(with = "crate::io::float")]
    pub rve: f64,
    /// Dimension under the square root: `n` if `m >= n`, otherwise `m`.
    pub sqrt_factor_dim: usize,
    #[serde(with = "crate::io::float")]
    pub min_cond: f64,
    pub max_tol: f64,
    pub x_hat_norm: f64,
    /// `max Tol = 0`: the set has empty interior.
    pub unstable: bool,
    /// The estimate is the zero vector.
    pub degenerate_x_hat: bool,
}

/// Representative point of the right-hand side:
/// `(|mid + rad| + |mid - rad|) / 2` componentwise.
pub fn b_hat(b: &IntervalVector) -> Result<Vec<f64>> {
    if b.iter().all(|v| v.lo() == 0.0 && v.hi() == 0.0) {
        return Err(Error::ZeroRightHandSide);
    }
    Ok(b.iter().map(|v| 0.5 * (v.hi().abs() + v.lo().abs())).collect())
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Product `M * rest` with the conventions `0 * inf = 0` and
/// `M * inf = sign(M) * inf`.
fn signed_product(m: f64, cond: f64, rest: f64) -> f64 {
    if m == 0.0 {
        0.0
    } else if cond.is_infinite() {
        m.signum() * f64::INFINITY
    } else {
        m * cond * rest
    }
}

pub fn ive(fit: &FitResult, cond: &CondResult, sys: &IntervalSystem) -> Result<VariabilityReport> {
    let b_hat = b_hat(sys.rhs())?;
    let b_hat_norm = norm2(&b_hat);
    let (m, n) = (sys.m(), sys.n());
    let sqrt_factor_dim = if m >= n { n } else { m };

    let max_rad = sys.rhs().iter().map(|v| v.rad()).fold(1.0, f64::max);
    let max_tol = if fit.max_tol.abs() <= ZERO_TOL_REL * max_rad {
        0.0
    } else {
        fit.max_tol
    };
    let x_hat_norm = norm2(&fit.x_hat);
    let min_cond = cond.min_cond;

    let ive = signed_product(
        max_tol,
        min_cond,
        (sqrt_factor_dim as f64).sqrt() * x_hat_norm / b_hat_norm,
    );
    let rve = signed_product(max_tol, min_cond, n as f64 / b_hat_norm);

    Ok(VariabilityReport {
        b_hat,
        b_hat_norm,
        ive,
        abs_ive: ive.abs(),
        rve,
        sqrt_factor_dim,
        min_cond,
        max_tol,
        x_hat_norm,
        unstable: max_tol == 0.0,
        degenerate_x_hat: x_hat_norm == 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::interval::Matrix;
    use crate::maximize::FitMethod;

    fn fit(max_tol: f64, x_hat: Vec<f64>) -> FitResult {
        FitResult {
            max_tol,
            x_hat,
            iterations: 0,
            evaluations: 0,
            converged: true,
            method: FitMethod::ExactOracle,
            non_unique: false,
            trace: Vec::new(),
        }
    }

    fn cond(c: f64) -> CondResult {
        CondResult {
            min_cond: c,
            argmin_matrix: Matrix::identity(1),
            evaluations: 0,
            seed: 0,
            all_probes_singular: c.is_infinite(),
            singular_certified: false,
        }
    }

    #[test]
    fn representative_point() {
        let b = IntervalVector::from_bounds(&[(190.0, 210.0), (-1.0, 1.0), (-2.0, 1.0)]).unwrap();
        assert_eq!(b_hat(&b).unwrap(), vec![200.0, 1.0, 1.5]);
        let zero = IntervalVector::from_bounds(&[(0.0, 0.0), (0.0, 0.0)]).unwrap();
        assert!(matches!(b_hat(&zero), Err(Error::ZeroRightHandSide)));
    }

    #[test]
    fn published_examples() {
        let s16 = fixtures::three_by_two_system();
        let r = ive(&fit(1.9095, vec![0.0, 2.0603]), &cond(103.83), &s16).unwrap();
        assert!((r.b_hat_norm - 124100f64.sqrt()).abs() < 1e-9);
        assert_eq!(r.sqrt_factor_dim, 2);
        assert!((r.ive - 1.6399).abs() < 1e-3, "{}", r.ive);

        let s18 = fixtures::two_by_three_system();
        let r = ive(&fit(3.9698, vec![2.0603, 0.0, 0.0]), &cond(103.83), &s18).unwrap();
        assert!((r.b_hat_norm - 290.0).abs() < 1e-9);
        assert_eq!(r.sqrt_factor_dim, 2);
        assert!((r.ive - 4.1413).abs() < 1e-3, "{}", r.ive);
    }

    #[test]
    fn zero_and_infinite_cases() {
        let s14 = fixtures::unstable_segment_system(0.0);
        let r = ive(&fit(3e-12, vec![0.5, -0.5]), &cond(1e6), &s14).unwrap();
        assert_eq!(r.ive, 0.0);
        assert!(r.unstable);
        let r = ive(&fit(0.0, vec![0.5, -0.5]), &cond(f64::INFINITY), &s14).unwrap();
        assert_eq!(r.ive, 0.0);

        let s16 = fixtures::three_by_two_system();
        let r = ive(&fit(-0.5, vec![1.0, 1.0]), &cond(f64::INFINITY), &s16).unwrap();
        assert_eq!(r.ive, f64::NEG_INFINITY);
        assert_eq!(r.abs_ive, f64::INFINITY);
        assert_eq!(r.rve, f64::NEG_INFINITY);

        let r = ive(&fit(-0.5, vec![1.0, 1.0]), &cond(10.0), &s16).unwrap();
        assert!(r.ive < 0.0 && r.rve < 0.0);

        let r = ive(&fit(2.0, vec![0.0, 0.0]), &cond(10.0), &s16).unwrap();
        assert_eq!(r.ive, 0.0);
        assert!(r.degenerate_x_hat && !r.unstable);
    }

    #[test]
    fn relative_measure_formula() {
        let s16 = fixtures::three_by_two_system();
        let r = ive(&fit(2.0, vec![0.0, 1.0]), &cond(10.0), &s16).unwrap();
        assert!((r.rve - 2.0 * 10.0 * 2.0 / 124100f64.sqrt()).abs() < 1e-12);
    }
}
