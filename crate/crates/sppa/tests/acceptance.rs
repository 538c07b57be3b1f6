//! Acceptance suite: the quantitative exit criteria of the library, one test
//! per criterion. Each prints a single pass/fail line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::time::Instant;

use sppa::benchmarks;
use sppa::geometry::Space;
use sppa::rates::RateCertificate;
use sppa::schedule::Schedule;
use sppa::sim::{monte_carlo, run_trajectory, McConfig, RunStats};
use sppa::stochastic::RngStream;
use sppa::verify::{
    self, check_independence, check_monotonicity_step, check_quasi_fejer_step,
    check_supermartingale_tail, geometry_suite, independence_sampled,
};

const SEED: u64 = 0xacce_97ed;

fn spaces() -> [Space; 3] {
    [
        Space::Euclidean { dim: 2 },
        Space::Hyperboloid { dim: 2 },
        Space::Spider { legs: 3 },
    ]
}

fn report_line(criterion: u32, passed: bool, detail: &str) {
    let status = if passed { "PASS" } else { "FAIL" };
    println!("[criterion {criterion}] {status} — {detail}");
    assert!(passed, "criterion {criterion} failed: {detail}");
}

/// 1. Geometry property suite: 10^4 random instances per space per
///    inequality, zero violations at 1e−9 slack (hyperboloid 1e−7), under 10 s.
#[test]
fn criterion_1_geometry_properties() {
    let started = Instant::now();
    let mut worst = f64::INFINITY;
    let mut violations = 0;
    let mut cases = 0;
    for space in spaces() {
        for r in geometry_suite(&space, 10_000, SEED, None) {
            worst = worst.min(r.min_slack);
            violations += r.violations;
            cases += r.cases;
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    report_line(
        1,
        violations == 0 && elapsed < 10.0,
        &format!("{cases} cases, min slack {worst:.3e}, {violations} violations, {elapsed:.2}s"),
    );
}

/// 2. Resolvent correctness: closed form vs. oracle within 1e−6 over 10^3
///    triples per space; nonexpansiveness and fixed-point checks clean;
///    under 30 s.
#[test]
fn criterion_2_resolvent_correctness() {
    let started = Instant::now();
    let mut violations = 0;
    let mut cases = 0;
    let mut details = String::new();
    for space in spaces() {
        for r in verify::fields_suite(&space, 1_000, 10_000, SEED ^ 2, None) {
            violations += r.violations;
            cases += r.cases;
            if r.violations > 0 {
                details.push_str(&format!(" {}:{}", r.name, r.violations));
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    report_line(
        2,
        violations == 0 && elapsed < 30.0,
        &format!("{cases} cases, {violations} violations{details}, {elapsed:.2}s"),
    );
}

/// 3. Pathwise recurrence inequalities with exact enumerated conditional
///    expectations: β ∈ {0.25, 0.5} and the strong-monotonicity variant, on
///    the Euclidean and hyperboloid benchmarks, 10 trajectories of 10^4
///    steps, min slack ≥ −1e−9 (Euclidean) / −1e−7 (hyperboloid); under 60 s.
#[test]
fn criterion_3_pathwise_recurrences() {
    let started = Instant::now();
    let mut worst_by_space = Vec::new();
    let mut ok = true;
    for (name, dist, x0, tol) in [
        (
            "euclidean",
            benchmarks::euclidean(),
            benchmarks::euclidean_x0(),
            1e-9,
        ),
        (
            "hyperboloid",
            benchmarks::hyperboloid(),
            benchmarks::hyperboloid_x0(),
            1e-7,
        ),
    ] {
        let mut worst = f64::INFINITY;
        for rep in 0..10 {
            let mut rng = RngStream::for_replication(SEED ^ 3, rep);
            let traj = run_trajectory(&dist, Schedule::Harmonic, &x0, 10_000, &mut rng).unwrap();
            for beta in [0.25, 0.5] {
                let r =
                    check_quasi_fejer_step(&dist, Schedule::Harmonic, &traj, beta, tol).unwrap();
                worst = worst.min(r.min_slack);
                ok &= r.violations == 0;
            }
            let r = check_monotonicity_step(&dist, Schedule::Harmonic, &traj, tol).unwrap();
            worst = worst.min(r.min_slack);
            ok &= r.violations == 0;
        }
        worst_by_space.push(format!("{name} min slack {worst:.3e} (tol {tol:.0e})"));
    }
    let elapsed = started.elapsed().as_secs_f64();
    report_line(
        3,
        ok && elapsed < 60.0,
        &format!("{}, {elapsed:.2}s", worst_by_space.join("; ")),
    );
}

fn euclidean_harmonic_run(replications: u64) -> RunStats {
    monte_carlo(
        &benchmarks::euclidean(),
        Schedule::Harmonic,
        &benchmarks::euclidean_x0(),
        &McConfig {
            n_steps: 10_000,
            replications,
            seed: SEED ^ 4,
            eps_grid: vec![0.25, 1.0],
        },
    )
    .unwrap()
}

/// 4. The harmonic-schedule mean bound 4·max{C,D}/ln(n+2) holds at every
///    logged step of the Euclidean benchmark (R = 10^3, N = 10^4), with the
///    certificate pinned from exact constants; under 60 s.
#[test]
fn criterion_4_remark_bound() {
    let started = Instant::now();
    let dist = benchmarks::euclidean();
    let stats = euclidean_harmonic_run(1_000);
    let cert =
        RateCertificate::pinned(&dist, &benchmarks::euclidean_x0(), Schedule::Harmonic, None)
            .unwrap();
    let mut ok = true;
    let mut tightest = f64::INFINITY;
    for (i, &n) in stats.logged_n.iter().enumerate() {
        let bound = cert.remark_bound(n);
        let ratio = bound / stats.mean_sq_dist[i];
        tightest = tightest.min(ratio);
        ok &= stats.mean_sq_dist[i] <= bound;
    }
    let elapsed = started.elapsed().as_secs_f64();
    report_line(
        4,
        ok && elapsed < 60.0,
        &format!(
            "C={:.3}, D={:.3}, bound/mean >= {tightest:.1} at every logged n, {elapsed:.2}s",
            cert.big_c, cert.big_d
        ),
    );
}

/// 5. Fast guarantee: with the measured second-moment bound σ, the mean
///    obeys u/(n+2) + 3·stderr at every logged step, and the log-log slope of
///    the mean over n ∈ [10^2, 10^5] is −1 ± 0.15 (R = 10^3); under 120 s.
#[test]
fn criterion_5_fast_rate() {
    let started = Instant::now();
    let dist = benchmarks::euclidean();
    let schedule = Schedule::FastHarmonic {
        alpha_bar: dist.mean_modulus(),
    };
    let stats = monte_carlo(
        &dist,
        schedule,
        &benchmarks::euclidean_x0(),
        &McConfig {
            n_steps: 100_000,
            replications: 1_000,
            seed: SEED ^ 5,
            eps_grid: vec![0.25, 1.0],
        },
    )
    .unwrap();
    let cert = RateCertificate::pinned(
        &dist,
        &benchmarks::euclidean_x0(),
        schedule,
        Some(stats.sigma_measured),
    )
    .unwrap();

    let mut bound_ok = true;
    for (i, &n) in stats.logged_n.iter().enumerate() {
        bound_ok &= stats.mean_sq_dist[i] <= cert.fast_mean_bound(n) + 3.0 * stats.stderr[i];
    }

    // Log-log regression of the mean against n+2 over [1e2, 1e5].
    let pts: Vec<(f64, f64)> = stats
        .logged_n
        .iter()
        .zip(&stats.mean_sq_dist)
        .filter(|(&n, _)| (100..=100_000).contains(&n))
        .map(|(&n, &m)| ((n as f64 + 2.0).ln(), m.ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<f64>();

    let elapsed = started.elapsed().as_secs_f64();
    report_line(
        5,
        bound_ok && (slope + 1.0).abs() <= 0.15 && elapsed < 120.0,
        &format!(
            "sigma={:.3}, u={:.3}, mean <= u/(n+2)+3se everywhere: {bound_ok}, slope {slope:.4}, {elapsed:.2}s",
            stats.sigma_measured,
            cert.u.unwrap()
        ),
    );
}

/// 6. The square-integrability bound E[d²(x_n,x*)] ≤ b + cΛ + 3·stderr holds
///    at every logged step on all benchmarks (harmonic) and on the fast run.
#[test]
fn criterion_6_l2_bound() {
    let started = Instant::now();
    let mut ok = true;
    let mut details = Vec::new();
    let runs: Vec<(&str, sppa::ScenarioDistribution, sppa::Point, Schedule)> = vec![
        (
            "euclidean",
            benchmarks::euclidean(),
            benchmarks::euclidean_x0(),
            Schedule::Harmonic,
        ),
        (
            "hyperboloid",
            benchmarks::hyperboloid(),
            benchmarks::hyperboloid_x0(),
            Schedule::Harmonic,
        ),
        (
            "spider",
            benchmarks::spider(),
            benchmarks::spider_x0(),
            Schedule::Harmonic,
        ),
        (
            "euclidean-fast",
            benchmarks::euclidean(),
            benchmarks::euclidean_x0(),
            Schedule::FastHarmonic { alpha_bar: 1.0 },
        ),
    ];
    for (name, dist, x0, schedule) in runs {
        let stats = monte_carlo(
            &dist,
            schedule,
            &x0,
            &McConfig {
                n_steps: 10_000,
                replications: 1_000,
                seed: SEED ^ 6,
                eps_grid: vec![1.0],
            },
        )
        .unwrap();
        let cert = RateCertificate::pinned(&dist, &x0, schedule, None).unwrap();
        let cap = cert.b + cert.c * cert.lambda_sq_bound;
        let mut worst_margin = f64::INFINITY;
        for (i, &m) in stats.mean_sq_dist.iter().enumerate() {
            let margin = cap + 3.0 * stats.stderr[i] - m;
            worst_margin = worst_margin.min(margin);
            ok &= margin >= 0.0;
        }
        details.push(format!(
            "{name}: b+cΛ={cap:.2}, worst margin {worst_margin:.3}"
        ));
    }
    let elapsed = started.elapsed().as_secs_f64();
    report_line(6, ok, &format!("{}, {elapsed:.2}s", details.join("; ")));
}

/// 7. The maximal-inequality tail bound: empirical sup-tail frequency at
///    most Ê[X_{n₀}]/ε + 3·stderr for ε ∈ {0.25, 1.0} and n₀ ∈ {10², 10³},
///    R = 10^3.
#[test]
fn criterion_7_ville_tail() {
    let started = Instant::now();
    let dist = benchmarks::euclidean();
    let x_star = dist.zero_of_mean().unwrap();
    let c = dist.phi_star(&x_star).unwrap().second_moment(&dist) + 1e-9;
    let cases = check_supermartingale_tail(
        &dist,
        Schedule::Harmonic,
        &benchmarks::euclidean_x0(),
        10_000,
        c,
        &[100, 1_000],
        &[0.25, 1.0],
        1_000,
        SEED ^ 7,
    )
    .unwrap();
    let ok = cases.iter().all(|c| c.passed());
    let detail = cases
        .iter()
        .map(|c| {
            format!(
                "n0={} eps={}: {:.4} <= {:.4}",
                c.n0, c.eps, c.empirical, c.bound
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    let elapsed = started.elapsed().as_secs_f64();
    report_line(7, ok, &format!("{detail}, {elapsed:.2}s"));
}

/// 8. The sequence lemmas hold on 10^3 randomized feasible instances each;
///    under 5 s.
#[test]
fn criterion_8_sequence_lemmas() {
    let started = Instant::now();
    let reports = verify::aux_suite(1_000, SEED ^ 8);
    let ok = reports.iter().all(|r| r.passed() && r.cases == 1_000);
    let elapsed = started.elapsed().as_secs_f64();
    let detail = reports
        .iter()
        .map(|r| {
            format!(
                "{}: {} cases, min slack {:.3e}",
                r.name, r.cases, r.min_slack
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    report_line(8, ok && elapsed < 5.0, &format!("{detail}, {elapsed:.2}s"));
}

/// 9. The independence condition: the exact per-trajectory conditional
///    expectation vanishes (≤ 1e−9) on the flat-tangent benchmarks; the
///    spider statistic is reported without a contract. The sampled statistic
///    also stays within 3 standard errors of zero on the flat benchmarks.
#[test]
fn criterion_9_independence_condition() {
    let started = Instant::now();
    let mut ok = true;
    let mut details = Vec::new();
    for (name, dist, x0) in [
        (
            "euclidean",
            benchmarks::euclidean(),
            benchmarks::euclidean_x0(),
        ),
        (
            "hyperboloid",
            benchmarks::hyperboloid(),
            benchmarks::hyperboloid_x0(),
        ),
    ] {
        let rep = check_independence(&dist, Schedule::Harmonic, &x0, 64, 1_000, SEED ^ 9).unwrap();
        ok &= rep.max_abs <= 1e-9;
        let (mean, stderr) =
            independence_sampled(&dist, Schedule::Harmonic, &x0, 64, 1_000, SEED ^ 10).unwrap();
        ok &= mean.abs() <= 3.0 * stderr;
        details.push(format!(
            "{name}: exact max |value| {:.2e}, sampled mean {mean:.2e} (se {stderr:.2e})",
            rep.max_abs
        ));
    }
    let spider = check_independence(
        &benchmarks::spider(),
        Schedule::Harmonic,
        &benchmarks::spider_x0(),
        64,
        1_000,
        SEED ^ 9,
    )
    .unwrap();
    details.push(format!(
        "spider (no contract): mean {:.3e}, stderr {:.3e}",
        spider.mean, spider.stderr
    ));
    let elapsed = started.elapsed().as_secs_f64();
    report_line(9, ok, &format!("{}, {elapsed:.2}s", details.join("; ")));
}
