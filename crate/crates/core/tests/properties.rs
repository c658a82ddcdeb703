mod common;

use common::{planted_system, random_vec, rng, system_batch};
use ivefit::interval::{IntervalMatrix, Matrix};
use ivefit::{
    check_boundedness, cond2, contract_rhs, maximize_tol, maximize_tol_exact, maximize_tol_split, min_cond,
    row_image, shift_rhs, tol, tol_subgradient, tss_hull, tss_hull_split, tss_member, tss_polygon_2d,
    AnnealConfig, IntervalSystem, IntervalVector, SolverConfig,
};
use proptest::prelude::*;
use rand::Rng;

fn tolv(sys: &IntervalSystem, x: &[f64]) -> f64 {
    tol(sys, x).unwrap().value
}

#[test]
fn tol_is_concave() {
    let mut r = rng(1);
    let mut triples = 0;
    for sys in system_batch(100, 50) {
        for _ in 0..20 {
            let x = random_vec(&mut r, sys.n(), 5.0);
            let y = random_vec(&mut r, sys.n(), 5.0);
            let l: f64 = r.random();
            let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| l * a + (1.0 - l) * b).collect();
            let lhs = tolv(&sys, &z);
            let rhs = l * tolv(&sys, &x) + (1.0 - l) * tolv(&sys, &y);
            assert!(lhs >= rhs - 1e-12, "{lhs} < {rhs}");
            triples += 1;
        }
    }
    assert_eq!(triples, 1000);
}

#[test]
fn shift_law_is_exact() {
    let mut r = rng(2);
    for sys in system_batch(200, 50) {
        let min_rad = sys.rhs().min_rad();
        for c in [0.0, 1.0, 0.37, 12.5, -min_rad, -0.5 * min_rad] {
            let shifted = shift_rhs(&sys, c).unwrap();
            for _ in 0..10 {
                let x = random_vec(&mut r, sys.n(), 5.0);
                let d = tolv(&shifted, &x) - tolv(&sys, &x) - c;
                assert!(d.abs() <= 1e-12, "shift {c}: residual {d}");
            }
        }
    }
}

#[test]
fn max_tol_shifts_with_rhs() {
    for sys in system_batch(300, 30) {
        let m0 = maximize_tol_exact(&sys).unwrap().max_tol;
        for c in [0.5, 2.0, -0.5 * sys.rhs().min_rad()] {
            let m1 = maximize_tol_exact(&shift_rhs(&sys, c).unwrap()).unwrap().max_tol;
            assert!((m1 - m0 - c).abs() <= 1e-8, "{m1} vs {m0} + {c}");
        }
    }
}

#[test]
fn contracting_by_max_tol_gives_zero_maximum() {
    let mut checked = 0;
    for sys in system_batch(400, 60) {
        let fit = maximize_tol_exact(&sys).unwrap();
        if fit.max_tol < 0.0 {
            continue;
        }
        let contracted = contract_rhs(&sys, fit.max_tol).unwrap();
        let m = maximize_tol_exact(&contracted).unwrap().max_tol;
        assert!(m.abs() <= 1e-6, "contracted max {m}");
        let at_old = tolv(&contracted, &fit.x_hat);
        assert!(at_old.abs() <= 1e-6, "tol at old argmax {at_old}");
        checked += 1;
    }
    assert!(checked >= 30, "only {checked} nonempty systems");
}

#[test]
fn membership_matches_sign_of_tol() {
    let mut r = rng(5);
    let mut members = 0;
    for sys in system_batch(500, 20) {
        let centre = maximize_tol_exact(&sys).unwrap().x_hat;
        for _ in 0..1000 {
            let x: Vec<f64> = centre.iter().map(|c| c + r.random_range(-1.5..1.5)).collect();
            let t = tolv(&sys, &x);
            let direct = sys
                .rhs()
                .iter()
                .enumerate()
                .all(|(i, bi)| bi.contains_interval(&row_image(sys.matrix().row(i), &x).unwrap()));
            if t.abs() > 1e-12 {
                assert_eq!(direct, t >= 0.0, "x = {x:?}, tol = {t}");
                assert_eq!(tss_member(&sys, &x).unwrap(), t >= 0.0);
            }
            members += usize::from(direct);
        }
    }
    assert!(members > 0);
}

#[test]
fn ascent_agrees_with_exact_oracle() {
    let cfg = SolverConfig::default();
    for (k, sys) in system_batch(600, 50).iter().enumerate() {
        let exact = maximize_tol_exact(sys).unwrap();
        let ascent = maximize_tol(sys, &cfg).unwrap();
        assert!(
            (ascent.max_tol - exact.max_tol).abs() <= 1e-6,
            "system {k}: ascent {} vs exact {}",
            ascent.max_tol,
            exact.max_tol
        );
        let split = maximize_tol_split(sys).unwrap();
        assert!((split.max_tol - exact.max_tol).abs() <= 1e-9);
    }
}

#[test]
fn exact_oracle_matches_grid_search() {
    let mut r = rng(7);
    let mut done = 0;
    while done < 3 {
        let sys = planted_system(&mut r, 2, 2, 1.0);
        let exact = maximize_tol_exact(&sys).unwrap();
        if exact.x_hat.iter().any(|v| v.abs() > 4.9) {
            continue;
        }
        let mut best = f64::NEG_INFINITY;
        let steps = 10_000;
        for i in 0..=steps {
            let x0 = -5.0 + 10.0 * i as f64 / steps as f64;
            for j in 0..=steps {
                let x1 = -5.0 + 10.0 * j as f64 / steps as f64;
                best = best.max(tolv(&sys, &[x0, x1]));
            }
        }
        assert!(best <= exact.max_tol + 1e-9);
        assert!(best >= exact.max_tol - 2e-3, "grid {best} vs exact {}", exact.max_tol);
        done += 1;
    }
}

#[test]
fn subgradient_matches_finite_differences() {
    let h = 1e-7;
    let mut r = rng(8);
    for sys in system_batch(800, 10) {
        let n = sys.n();
        let mut checked = 0;
        let mut attempts = 0;
        while checked < 100 {
            attempts += 1;
            assert!(attempts < 100_000);
            let x = random_vec(&mut r, n, 4.0);
            if x.iter().any(|v| v.abs() < 1e-4) {
                continue;
            }
            // accept only points whose active piece is unchanged nearby
            let piece = tol(&sys, &x).unwrap();
            let key = (piece.active_row, piece.active_endpoint);
            let smooth = (0..n).all(|j| {
                [1e-4, -1e-4].iter().all(|d| {
                    let mut y = x.clone();
                    y[j] += d;
                    let p = tol(&sys, &y).unwrap();
                    (p.active_row, p.active_endpoint) == key
                })
            });
            if !smooth {
                continue;
            }
            let g = tol_subgradient(&sys, &x).unwrap();
            for j in 0..n {
                let (mut xp, mut xm) = (x.clone(), x.clone());
                xp[j] += h;
                xm[j] -= h;
                let fd = (tolv(&sys, &xp) - tolv(&sys, &xm)) / (2.0 * h);
                assert!((fd - g[j]).abs() <= 1e-6 * g[j].abs().max(1.0), "fd {fd} vs {}", g[j]);
            }
            checked += 1;
        }
    }
}

#[test]
fn argmax_admits_no_ascent_direction() {
    let mut r = rng(9);
    for sys in system_batch(900, 20) {
        let fit = maximize_tol_exact(&sys).unwrap();
        for _ in 0..50 {
            let d = random_vec(&mut r, sys.n(), 1.0);
            for t in [1e-6, 1e-4, 1e-2] {
                let y: Vec<f64> = fit.x_hat.iter().zip(&d).map(|(a, b)| a + t * b).collect();
                assert!(tolv(&sys, &y) <= fit.max_tol + 1e-9);
            }
        }
    }
}

#[test]
fn ascent_best_value_is_monotone() {
    let cfg = SolverConfig {
        record_trace: true,
        ..SolverConfig::default()
    };
    for sys in system_batch(1000, 10) {
        let fit = maximize_tol(&sys, &cfg).unwrap();
        assert!(fit.trace.windows(2).all(|w| w[1] >= w[0]));
    }
}

#[test]
fn cond_is_scale_invariant_and_at_least_one() {
    let mut r = rng(10);
    for _ in 0..100 {
        let (m, n) = (r.random_range(1..6), r.random_range(1..6));
        let a = Matrix::new(m, n, random_vec(&mut r, m * n, 5.0)).unwrap();
        let c0 = cond2(&a);
        assert!(c0 >= 1.0 - 1e-12);
        for s in [-3.0, 0.001, 250.0] {
            let c1 = cond2(&a.scaled(s));
            assert!((c1 - c0).abs() <= 1e-10 * c0, "{c1} vs {c0}");
        }
    }
}

#[test]
fn min_cond_never_exceeds_midpoint_and_is_attained() {
    let mut r = rng(11);
    let cfg = AnnealConfig {
        steps: 500,
        restarts: 2,
        ..AnnealConfig::default()
    };
    for _ in 0..10 {
        let sys = planted_system(&mut r, 3, 2, 1.0);
        let a = sys.matrix();
        let res = min_cond(a, &cfg);
        assert!(res.min_cond <= cond2(&a.mid()) + 1e-9);
        assert!(a.contains_matrix(&res.argmin_matrix));
        assert!((cond2(&res.argmin_matrix) - res.min_cond).abs() <= 1e-9 * res.min_cond);
    }
}

#[test]
fn more_restarts_never_increase_min_cond() {
    let a = ivefit::fixtures::three_by_two_system().matrix().clone();
    let base = AnnealConfig {
        steps: 300,
        vertex_probes: 0,
        interior_probes: 0,
        polish: false,
        ..AnnealConfig::default()
    };
    let mut prev = f64::INFINITY;
    for restarts in [1, 2, 4, 8] {
        let c = min_cond(&a, &AnnealConfig { restarts, ..base.clone() }).min_cond;
        assert!(c <= prev, "{restarts} restarts: {c} > {prev}");
        prev = c;
    }
}

proptest! {
    #[test]
    fn norm_equivalence(y in proptest::collection::vec(-1e6f64..1e6, 1..20)) {
        let inf = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let two = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let n = y.len() as f64;
        prop_assert!(inf <= two * (1.0 + 1e-15));
        prop_assert!(two <= n.sqrt() * inf * (1.0 + 1e-15));
    }
}

#[test]
fn hull_contains_every_sampled_member() {
    let mut r = rng(12);
    let mut samples = 0;
    for sys in system_batch(1200, 24) {
        let Ok(hull) = tss_hull(&sys) else {
            continue;
        };
        let split = tss_hull_split(&sys).unwrap();
        for (a, b) in hull.comps().iter().zip(split.comps()) {
            assert!((a.lo() - b.lo()).abs() <= 1e-7 && (a.hi() - b.hi()).abs() <= 1e-7);
        }
        // sample in a box twice the hull's size
        for _ in 0..2000 {
            let x: Vec<f64> = hull
                .comps()
                .iter()
                .map(|c| c.mid() + 2.0 * c.rad().max(1e-3) * r.random_range(-1.0..1.0))
                .collect();
            if tss_member(&sys, &x).unwrap() {
                assert!(
                    hull.comps()
                        .iter()
                        .zip(&x)
                        .all(|(c, v)| c.lo() - 1e-9 <= *v && *v <= c.hi() + 1e-9),
                    "member {x:?} outside {hull:?}"
                );
                samples += 1;
            }
        }
    }
    assert!(samples > 100);
}

#[test]
fn hull_faces_are_attained() {
    let mut r = rng(13);
    let mut checked = 0;
    while checked < 15 {
        let sys = planted_system(&mut r, 3, 2, 1.0);
        let Ok(poly) = tss_polygon_2d(&sys) else {
            continue;
        };
        let hull = tss_hull(&sys).unwrap();
        for v in &poly {
            assert!(tolv(&sys, v) >= -1e-9, "vertex {v:?}");
        }
        for k in 0..2 {
            let lo = poly.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
            let hi = poly.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max);
            assert!((lo - hull.comps()[k].lo()).abs() <= 1e-9);
            assert!((hi - hull.comps()[k].hi()).abs() <= 1e-9);
        }
        checked += 1;
    }
}

#[test]
fn tolerable_set_lies_in_every_point_solution_set() {
    let mut r = rng(14);
    for sys in system_batch(1400, 12) {
        let fit = maximize_tol_exact(&sys).unwrap();
        if fit.max_tol < 0.0 {
            continue;
        }
        let members: Vec<Vec<f64>> = (0..5000)
            .map(|_| fit.x_hat.iter().map(|c| c + r.random_range(-1.0..1.0)).collect::<Vec<f64>>())
            .filter(|x| tss_member(&sys, x).unwrap())
            .collect();
        let a = sys.matrix();
        for _ in 0..20 {
            let data = a
                .entries()
                .iter()
                .map(|e| r.random_range(e.lo()..=e.hi()))
                .collect();
            let pm = Matrix::new(a.rows(), a.cols(), data).unwrap();
            let point_sys = IntervalSystem::new(IntervalMatrix::from_point(&pm), sys.rhs().clone()).unwrap();
            for x in &members {
                assert!(tss_member(&point_sys, x).unwrap());
            }
        }
    }
}

#[test]
fn dependent_point_columns_give_unbounded_set() {
    let a = Matrix::from_rows(&[vec![1.0, 2.0, 0.5], vec![1.0, 2.0, -1.0], vec![2.0, 4.0, 3.0]]).unwrap();
    let sys = IntervalSystem::with_point_matrix(
        &a,
        IntervalVector::from_bounds(&[(-1.0, 1.0), (-1.0, 1.0), (-2.0, 2.0)]).unwrap(),
    )
    .unwrap();
    let v = check_boundedness(&sys).unwrap();
    assert!(!v.is_bounded());
    assert_eq!(v.witness, Some(vec![0, 1, 2]));
    for t in [1.0, 100.0, 1e5] {
        assert!(tss_member(&sys, &[2.0 * t, -t, 0.0]).unwrap());
    }
}
