//! The stochastic proximal point iteration and its Monte Carlo harness.
//!
//! A single path is `x_{n+1} = J_{λ_n}(ξ_{n+1}, x_n)` with scenario draws from
//! a seeded [`RngStream`]; [`run_trajectory`] materializes it,
//! [`stream_trajectory`] visits it without storing points.
//!
//! [`monte_carlo`] runs `R` replications on split streams (master seed XOR
//! replication index) in parallel and aggregates per logged step: sample mean
//! and standard error of `d²(x_n, x*)`, empirical sup-tail frequencies
//! `P(∃ m ∈ [n, N]: d²(x_m, x*) ≥ ε)` over an ε grid, and the measured
//! second-moment bound `σ = max_n Σ_s p_s‖A_{λ_n}(s, x_n)‖²` over logged
//! steps. Logged steps sit on the geometric grid `{0, 1, 2, 4, …} ∪ {N}` so
//! memory stays bounded for long runs.
//!
//! Aggregation is deterministic: per-replication results are collected in
//! replication order and reduced with a fixed-shape pairwise tree, so a given
//! seed yields byte-identical statistics regardless of thread scheduling.

use rayon::prelude::*;

use crate::fields::StronglyMonotoneField;
use crate::geometry::{distance, Point};
use crate::rates::RateCertificate;
use crate::schedule::Schedule;
use crate::stochastic::{RngStream, ScenarioDistribution};
use crate::Result;

/// One realized path: points `x_0..x_N`, scenario draws, and squared
/// distances to `x*`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub points: Vec<Point>,
    pub draws: Vec<usize>,
    pub sq_dist: Vec<f64>,
    pub x_star: Point,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Runs `n_steps` iterations, recording everything.
pub fn run_trajectory(
    dist: &ScenarioDistribution,
    schedule: Schedule,
    x0: &Point,
    n_steps: u64,
    rng: &mut RngStream,
) -> Result<Trajectory> {
    let x_star = dist.zero_of_mean()?;
    let mut points = Vec::with_capacity(n_steps as usize + 1);
    let mut draws = Vec::with_capacity(n_steps as usize);
    let mut sq_dist = Vec::with_capacity(n_steps as usize + 1);
    let mut x = x0.clone();
    let d0 = distance(&x, &x_star);
    points.push(x.clone());
    sq_dist.push(d0 * d0);
    for n in 0..n_steps {
        let lambda = schedule.lambda(n);
        let s = dist.sample_scenario(rng);
        x = dist.field(s).resolvent(lambda, &x);
        let d = distance(&x, &x_star);
        points.push(x.clone());
        draws.push(s);
        sq_dist.push(d * d);
    }
    Ok(Trajectory {
        points,
        draws,
        sq_dist,
        x_star,
    })
}

/// Visits `(n, x_n, d²(x_n, x*))` for `n = 0..=n_steps` without storing the
/// path.
pub fn stream_trajectory(
    dist: &ScenarioDistribution,
    schedule: Schedule,
    x_star: &Point,
    x0: &Point,
    n_steps: u64,
    rng: &mut RngStream,
    mut visit: impl FnMut(u64, &Point, f64),
) {
    let mut x = x0.clone();
    let d0 = distance(&x, x_star);
    visit(0, &x, d0 * d0);
    for n in 0..n_steps {
        let lambda = schedule.lambda(n);
        let s = dist.sample_scenario(rng);
        x = dist.field(s).resolvent(lambda, &x);
        let d = distance(&x, x_star);
        visit(n + 1, &x, d * d);
    }
}

/// The geometric logging grid `{0, 1, 2, 4, …} ∪ {n}`.
pub fn log_grid(n: u64) -> Vec<u64> {
    let mut grid = vec![0];
    let mut p = 1u64;
    while p < n {
        grid.push(p);
        p = p.saturating_mul(2);
    }
    if n > 0 {
        grid.push(n);
    }
    grid
}

/// Monte Carlo run parameters.
#[derive(Clone, Debug)]
pub struct McConfig {
    pub n_steps: u64,
    pub replications: u64,
    pub seed: u64,
    pub eps_grid: Vec<f64>,
}

/// Aggregated statistics of a Monte Carlo run, indexed by the logging grid.
#[derive(Clone, Debug, PartialEq)]
pub struct RunStats {
    pub schedule: Schedule,
    pub logged_n: Vec<u64>,
    pub lambda: Vec<f64>,
    pub mean_sq_dist: Vec<f64>,
    pub stderr: Vec<f64>,
    /// `tail_freq[i][e]`: fraction of replications with
    /// `sup_{m ∈ [logged_n[i], N]} d²(x_m, x*) ≥ eps_grid[e]`.
    pub tail_freq: Vec<Vec<f64>>,
    pub eps_grid: Vec<f64>,
    /// Max over replications and logged steps of the exact conditional second
    /// moment `Σ_s p_s‖A_{λ_n}(s, x_n)‖²`.
    pub sigma_measured: f64,
    pub replications: u64,
    pub n_steps: u64,
    pub seed: u64,
}

struct RepStats {
    logged_d2: Vec<f64>,
    /// `exceed[i][e]`: suffix max of d² from `grid[i]` reaches `eps_grid[e]`.
    exceed: Vec<Vec<bool>>,
    sigma_max: f64,
}

fn replicate(
    dist: &ScenarioDistribution,
    schedule: Schedule,
    x_star: &Point,
    x0: &Point,
    cfg: &McConfig,
    grid: &[u64],
    rep: u64,
) -> RepStats {
    let levels = grid.len();
    let mut logged_d2 = vec![0.0; levels];
    let mut seg_max = vec![0.0; levels];
    let mut sigma_max = 0.0f64;
    let mut gi = 0usize;
    let mut rng = RngStream::for_replication(cfg.seed, rep);
    stream_trajectory(
        dist,
        schedule,
        x_star,
        x0,
        cfg.n_steps,
        &mut rng,
        |n, x, d2| {
            if gi < levels && n == grid[gi] {
                logged_d2[gi] = d2;
                seg_max[gi] = d2;
                let lambda = schedule.lambda(n);
                let second_moment = dist.conditional_expectation_next(|s| {
                    let a = dist.field(s).yosida_norm(lambda, x);
                    a * a
                });
                sigma_max = sigma_max.max(second_moment);
                gi += 1;
            } else {
                seg_max[gi - 1] = seg_max[gi - 1].max(d2);
            }
        },
    );
    debug_assert_eq!(gi, levels);
    // Suffix maxima over segments turn segment maxima into sup over [n, N].
    let mut suffix = seg_max;
    for i in (0..levels.saturating_sub(1)).rev() {
        suffix[i] = suffix[i].max(suffix[i + 1]);
    }
    let exceed = suffix
        .iter()
        .map(|&m| cfg.eps_grid.iter().map(|&e| m >= e).collect())
        .collect();
    RepStats {
        logged_d2,
        exceed,
        sigma_max,
    }
}

/// Fixed-shape pairwise tree sum; deterministic regardless of how the inputs
/// were produced.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => {
            let mid = n / 2;
            pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
        }
    }
}

/// Runs `R` replications on split streams and aggregates.
pub fn monte_carlo(
    dist: &ScenarioDistribution,
    schedule: Schedule,
    x0: &Point,
    cfg: &McConfig,
) -> Result<RunStats> {
    assert!(cfg.replications >= 1, "need at least one replication");
    let x_star = dist.zero_of_mean()?;
    let grid = log_grid(cfg.n_steps);
    let reps: Vec<RepStats> = (0..cfg.replications)
        .into_par_iter()
        .map(|rep| replicate(dist, schedule, &x_star, x0, cfg, &grid, rep))
        .collect();

    let r = cfg.replications as f64;
    let levels = grid.len();
    let mut mean_sq_dist = Vec::with_capacity(levels);
    let mut stderr = Vec::with_capacity(levels);
    let mut tail_freq = Vec::with_capacity(levels);
    let mut column = vec![0.0; reps.len()];
    for i in 0..levels {
        for (j, rep) in reps.iter().enumerate() {
            column[j] = rep.logged_d2[i];
        }
        let mean = pairwise_sum(&column) / r;
        mean_sq_dist.push(mean);
        let se = if reps.len() < 2 {
            0.0
        } else {
            let dev: Vec<f64> = column.iter().map(|x| (x - mean) * (x - mean)).collect();
            (pairwise_sum(&dev) / (r * (r - 1.0))).sqrt()
        };
        stderr.push(se);
        let freqs = (0..cfg.eps_grid.len())
            .map(|e| {
                let count = reps.iter().filter(|rep| rep.exceed[i][e]).count();
                count as f64 / r
            })
            .collect();
        tail_freq.push(freqs);
    }
    let sigma_measured = reps.iter().map(|r| r.sigma_max).fold(0.0, f64::max);
    Ok(RunStats {
        schedule,
        lambda: grid.iter().map(|&n| schedule.lambda(n)).collect(),
        logged_n: grid,
        mean_sq_dist,
        stderr,
        tail_freq,
        eps_grid: cfg.eps_grid.clone(),
        sigma_measured,
        replications: cfg.replications,
        n_steps: cfg.n_steps,
        seed: cfg.seed,
    })
}

impl RunStats {
    /// Writes the run as CSV with the certificate's bound columns. Floats use
    /// the shortest round-trip representation, so a given seed produces
    /// byte-identical output everywhere.
    pub fn write_csv<W: std::io::Write>(
        &self,
        w: &mut W,
        cert: &RateCertificate,
    ) -> std::io::Result<()> {
        write!(w, "n,lambda_n,mean_sq_dist,stderr,remark_bound,fast_bound")?;
        for eps in &self.eps_grid {
            write!(w, ",tail_freq_eps_{eps}")?;
        }
        writeln!(w)?;
        for i in 0..self.logged_n.len() {
            let n = self.logged_n[i];
            write!(
                w,
                "{},{},{},{},{}",
                n,
                self.lambda[i],
                self.mean_sq_dist[i],
                self.stderr[i],
                cert.remark_bound(n)
            )?;
            match cert.u {
                Some(_) => write!(w, ",{}", cert.fast_mean_bound(n))?,
                None => write!(w, ",")?,
            }
            for e in 0..self.eps_grid.len() {
                write!(w, ",{}", self.tail_freq[i][e])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}
