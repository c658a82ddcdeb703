//! Reference interval systems used throughout the tests and by the `sweep`
//! command.

use crate::interval::{IntervalMatrix, IntervalVector};
use crate::tol::IntervalSystem;

fn build(a: &[Vec<(f64, f64)>], b: &[(f64, f64)]) -> IntervalSystem {
    IntervalSystem::new(
        IntervalMatrix::from_bounds(a).expect("valid fixture matrix"),
        IntervalVector::from_bounds(b).expect("valid fixture rhs"),
    )
    .expect("consistent fixture")
}

/// 2x2 system whose tolerable set is the segment from (0, -1) to (1, 0) for
/// every `eta >= 0`, with max Tol = 0.
pub fn unstable_segment_system(eta: f64) -> IntervalSystem {
    build(
        &[
            vec![(-1.0, 1.0), (-1.0, 1.0)],
            vec![(1.0, 1.0), (-1.0, -1.0)],
        ],
        &[(-1.0, 1.0), (1.0, 1.0 + eta)],
    )
}

/// Three measurements of a two-predictor linear function.
pub fn three_by_two_system() -> IntervalSystem {
    build(
        &[
            vec![(98.0, 100.0), (99.0, 101.0)],
            vec![(97.0, 99.0), (98.0, 100.0)],
            vec![(96.0, 98.0), (97.0, 99.0)],
        ],
        &[(190.0, 210.0), (200.0, 220.0), (190.0, 210.0)],
    )
}

/// Two measurements of a three-predictor function; the matrix is the
/// transpose of [`three_by_two_system`]'s.
pub fn two_by_three_system() -> IntervalSystem {
    build(
        &[
            vec![(98.0, 100.0), (97.0, 99.0), (96.0, 98.0)],
            vec![(99.0, 101.0), (98.0, 100.0), (97.0, 99.0)],
        ],
        &[(190.0, 210.0), (200.0, 220.0)],
    )
}

/// `n x n` system with `theta` on the diagonal, `[0, 2]` elsewhere and every
/// right-hand component equal to `[1, k]`.
pub fn theta_family_system(n: usize, k: f64, theta: f64) -> IntervalSystem {
    let a: Vec<Vec<(f64, f64)>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { (theta, theta) } else { (0.0, 2.0) })
                .collect()
        })
        .collect();
    build(&a, &vec![(1.0, k); n])
}

/// The `(n, K, theta)` grid swept by the `sweep` command.
pub const THETA_SWEEP: [(usize, f64, [f64; 5]); 4] = [
    (5, 10.0, [2.0, 4.0, 6.0, 8.0, 10.0]),
    (5, 20.0, [2.0, 4.0, 6.0, 8.0, 10.0]),
    (10, 10.0, [6.0, 9.0, 12.0, 15.0, 20.0]),
    (10, 20.0, [6.0, 9.0, 12.0, 15.0, 20.0]),
];
