//! Singular values, spectral condition numbers, and the minimum condition
//! number over an interval matrix by simulated annealing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::interval::{IntervalMatrix, Matrix};

/// `sigma_min <= SINGULAR_RATIO * sigma_max` counts as rank deficient in
/// [`cond2`].
pub const SINGULAR_RATIO: f64 = 1e-14;

/// Singular values in descending order, `min(m, n)` of them, by one-sided
/// Jacobi rotations on the columns of `A` (or of `A'` when `m < n`).
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    let tall = if a.rows() >= a.cols() { a.clone() } else { a.transpose() };
    let (m, n) = (tall.rows(), tall.cols());
    // column-major working copy
    let mut u = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            u[j * m + i] = tall.get(i, j);
        }
    }

    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    let (up, uq) = (u[p * m + i], u[q * m + i]);
                    alpha += up * up;
                    beta += uq * uq;
                    gamma += up * uq;
                }
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (up, uq) = (u[p * m + i], u[q * m + i]);
                    u[p * m + i] = c * up - s * uq;
                    u[q * m + i] = s * up + c * uq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = (0..n)
        .map(|j| u[j * m..(j + 1) * m].iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Spectral condition number `sigma_max / sigma_min`; `+inf` for rank
/// deficient matrices.
pub fn cond2(a: &Matrix) -> f64 {
    let sv = singular_values(a);
    let (max, min) = (sv[0], *sv.last().expect("nonempty matrix"));
    if max == 0.0 || min <= SINGULAR_RATIO * max {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(a: &Matrix, rel_tol: f64) -> usize {
    let sv = singular_values(a);
    if sv[0] == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * sv[0]).count()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealConfig {
    pub seed: u64,
    /// Independent annealing chains.
    pub restarts: usize,
    /// Steps per chain.
    pub steps: usize,
    /// Geometric cooling factor per step.
    pub cooling: f64,
    /// Proposal standard deviation as a fraction of each entry's radius.
    pub proposal_scale: f64,
    /// Random vertex matrices probed before annealing.
    pub vertex_probes: usize,
    /// Uniform random interior matrices probed before annealing.
    pub interior_probes: usize,
    /// Finish with a greedy endpoint search from the best matrix.
    pub polish: bool,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            restarts: 8,
            steps: 5000,
            cooling: 0.995,
            proposal_scale: 0.1,
            vertex_probes: 64,
            interior_probes: 64,
            polish: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CondResult {
    /// Smallest condition number found; an upper bound on the true minimum.
    pub min_cond: f64,
    pub argmin_matrix: Matrix,
    pub evaluations: usize,
    pub seed: u64,
    /// Every probed matrix was rank deficient.
    pub all_probes_singular: bool,
    /// Rank deficiency of every member is certain (dependent point columns).
    pub singular_certified: bool,
}

struct Candidate {
    cond: f64,
    matrix: Matrix,
    evaluations: usize,
}

impl Candidate {
    fn offer(&mut self, cond: f64, m: &Matrix) {
        if cond < self.cond {
            self.cond = cond;
            self.matrix = m.clone();
        }
    }
}

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_vertex(a: &IntervalMatrix, rng: &mut ChaCha8Rng) -> Matrix {
    let mut m = a.lo();
    for (v, e) in m.data_mut().iter_mut().zip(a.entries()) {
        if rng.random::<bool>() {
            *v = e.hi();
        }
    }
    m
}

fn random_interior(a: &IntervalMatrix, rng: &mut ChaCha8Rng) -> Matrix {
    let mut m = a.lo();
    for (v, e) in m.data_mut().iter_mut().zip(a.entries()) {
        *v = e.lo() + rng.random::<f64>() * (e.hi() - e.lo());
    }
    m
}

fn anneal_chain(a: &IntervalMatrix, cfg: &AnnealConfig, t0: f64, chain: usize) -> Candidate {
    let mut rng = stream(cfg.seed, chain as u64 + 1);
    let mut state = match chain {
        0 => a.mid(),
        k if k % 2 == 1 => random_vertex(a, &mut rng),
        _ => random_interior(a, &mut rng),
    };
    let mut current = cond2(&state);
    let mut best = Candidate {
        cond: current,
        matrix: state.clone(),
        evaluations: 1,
    };
    let sigmas: Vec<f64> = a.entries().iter().map(|e| cfg.proposal_scale * e.rad()).collect();
    let mut temperature = t0;
    let mut proposal = state.clone();

    for _ in 0..cfg.steps {
        for ((p, s), (&sigma, e)) in proposal
            .data_mut()
            .iter_mut()
            .zip(state.data())
            .zip(sigmas.iter().zip(a.entries()))
        {
            *p = if sigma > 0.0 {
                let z: f64 = StandardNormal.sample(&mut rng);
                (s + sigma * z).clamp(e.lo(), e.hi())
            } else {
                *s
            };
        }
        let c = cond2(&proposal);
        best.evaluations += 1;
        // rank deficient proposals are always rejected
        if c.is_finite() {
            let accept = c <= current
                || !current.is_finite()
                || rng.random::<f64>() < (-(c - current) / temperature).exp();
            if accept {
                std::mem::swap(&mut state, &mut proposal);
                current = c;
                best.offer(c, &state);
            }
        }
        temperature *= cfg.cooling;
    }
    best
}

/// Greedy search moving single entries to their endpoints while the
/// condition number decreases.
fn polish(a: &IntervalMatrix, best: &mut Candidate) {
    let mut m = best.matrix.clone();
    for _pass in 0..50 {
        let mut improved = false;
        for k in 0..a.entries().len() {
            let e = a.entries()[k];
            if e.is_degenerate() {
                continue;
            }
            let keep = m.data()[k];
            for v in [e.lo(), e.hi()] {
                if v == keep {
                    continue;
                }
                m.data_mut()[k] = v;
                let c = cond2(&m);
                best.evaluations += 1;
                if c < best.cond {
                    best.cond = c;
                    best.matrix = m.clone();
                    improved = true;
                    break;
                }
                m.data_mut()[k] = keep;
            }
            m.data_mut().copy_from_slice(best.matrix.data());
        }
        if !improved {
            break;
        }
    }
}

/// Upper estimate of `min cond2(A)` over the point matrices `A` in `a`.
///
/// Probes the midpoint, both endpoint matrices, random vertices and random
/// interior matrices, then runs `cfg.restarts` independent annealing chains
/// (chain 0 starts at the midpoint). Deterministic for a given seed; chain
/// `k` draws from its own stream, so adding restarts never raises the result.
pub fn min_cond(a: &IntervalMatrix, cfg: &AnnealConfig) -> CondResult {
    let mut rng = stream(cfg.seed, 0);
    let mid = a.mid();
    let mid_cond = cond2(&mid);
    let mut best = Candidate {
        cond: mid_cond,
        matrix: mid.clone(),
        evaluations: 1,
    };
    let mut probes = vec![a.lo(), a.hi()];
    probes.extend((0..cfg.vertex_probes).map(|_| random_vertex(a, &mut rng)));
    probes.extend((0..cfg.interior_probes).map(|_| random_interior(a, &mut rng)));
    for p in &probes {
        let c = cond2(p);
        best.evaluations += 1;
        best.offer(c, p);
    }

    let t0 = if mid_cond.is_finite() {
        mid_cond
    } else if best.cond.is_finite() {
        best.cond
    } else {
        1.0
    };

    let chains: Vec<Candidate> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| anneal_chain(a, cfg, t0, k))
        .collect();
    for c in chains {
        best.evaluations += c.evaluations;
        best.offer(c.cond, &c.matrix);
    }
    if cfg.polish && best.cond.is_finite() {
        polish(a, &mut best);
    }

    let all_probes_singular = !best.cond.is_finite();
    let singular_certified = {
        let cols = a.point_columns();
        a.mid()
            .select_columns(&cols)
            .is_some_and(|p| numerical_rank(&p, 1e-10) < cols.len())
    };
    CondResult {
        min_cond: best.cond,
        argmin_matrix: best.matrix,
        evaluations: best.evaluations,
        seed: cfg.seed,
        all_probes_singular,
        singular_certified,
    }
}
