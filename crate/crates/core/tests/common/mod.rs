#![allow(dead_code)]

use ivefit::{Interval, IntervalMatrix, IntervalSystem, IntervalVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize, r: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-r..r)).collect()
}

/// Random `m x n` system built around a planted solution `x0`, so the
/// tolerable set is usually nonempty. `slack` scales the extra width of `b`;
/// a small or negative slack yields empty sets as well.
pub fn planted_system(rng: &mut ChaCha8Rng, m: usize, n: usize, slack: f64) -> IntervalSystem {
    let x0 = random_vec(rng, n, 2.0);
    let rows: Vec<Vec<Interval>> = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let mid = rng.random_range(-3.0..3.0);
                    let rad = rng.random_range(0.01..0.3);
                    Interval::from_mid_rad(mid, rad).unwrap()
                })
                .collect()
        })
        .collect();
    let b = rows
        .iter()
        .map(|row| {
            let img = ivefit::row_image(row, &x0).unwrap();
            let extra = slack * rng.random_range(0.2..1.5);
            let shift = rng.random_range(-0.3..0.3);
            let mid = img.mid() + shift;
            let rad = (img.rad() + extra).max(0.05);
            Interval::from_mid_rad(mid, rad).unwrap()
        })
        .collect();
    IntervalSystem::new(IntervalMatrix::from_rows(rows).unwrap(), IntervalVector::new(b)).unwrap()
}

/// `count` random systems with `n` in `1..=3` and `m` in `n..=n+3`, mixing
/// nonempty and empty tolerable sets.
pub fn system_batch(seed: u64, count: usize) -> Vec<IntervalSystem> {
    let mut r = rng(seed);
    (0..count)
        .map(|k| {
            let n = r.random_range(1..=3);
            let m = r.random_range(n..=n + 3);
            let slack = if k % 4 == 3 { -0.5 } else { 1.0 };
            planted_system(&mut r, m, n, slack)
        })
        .collect()
}
