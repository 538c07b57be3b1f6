//! The fast schedule `λ_n = 1/(ᾱ(n+2))`: with a measured second-moment bound
//! on the Yosida approximates, the mean-square error obeys `u/(n+2)` — an
//! honest O(1/n) rate, visible as slope −1 on a log-log plot.
//!
//! Run with `cargo run --release --example fast_rates`.

use sppa::benchmarks;
use sppa::rates::RateCertificate;
use sppa::schedule::Schedule;
use sppa::sim::{monte_carlo, McConfig};

fn main() {
    let dist = benchmarks::euclidean();
    let x0 = benchmarks::euclidean_x0();
    let schedule = Schedule::FastHarmonic {
        alpha_bar: dist.mean_modulus(),
    };

    let stats = monte_carlo(
        &dist,
        schedule,
        &x0,
        &McConfig {
            n_steps: 100_000,
            replications: 500,
            seed: 7,
            eps_grid: vec![0.25],
        },
    )
    .expect("benchmark runs");
    let cert = RateCertificate::pinned(&dist, &x0, schedule, Some(stats.sigma_measured)).unwrap();

    println!(
        "fast schedule on the benchmark: measured sigma = {:.4}, u = {:.3}",
        stats.sigma_measured,
        cert.u.unwrap()
    );
    println!(
        "{:>8} {:>14} {:>14} {:>10}",
        "n", "mean d²", "u/(n+2)", "ratio"
    );
    for (i, &n) in stats.logged_n.iter().enumerate() {
        let bound = cert.fast_mean_bound(n);
        println!(
            "{:>8} {:>14.6e} {:>14.6e} {:>10.1}",
            n,
            stats.mean_sq_dist[i],
            bound,
            bound / stats.mean_sq_dist[i]
        );
    }

    // Least-squares slope of ln(mean) against ln(n+2) over n in [100, 1e5].
    let pts: Vec<(f64, f64)> = stats
        .logged_n
        .iter()
        .zip(&stats.mean_sq_dist)
        .filter(|(&n, _)| n >= 100)
        .map(|(&n, &m)| ((n as f64 + 2.0).ln(), m.ln()))
        .collect();
    let k = pts.len() as f64;
    let (mx, my) = (
        pts.iter().map(|p| p.0).sum::<f64>() / k,
        pts.iter().map(|p| p.1).sum::<f64>() / k,
    );
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<f64>();
    println!("log-log slope over n in [100, 100000]: {slope:.4} (theory: −1)");

    // The almost-sure tail bound that comes with the fast rate.
    for n in [100u64, 1_000, 10_000] {
        println!(
            "P(∃ m ≥ {n}: d² ≥ 0.25) ≤ {:.4e}",
            cert.fast_tail_bound(n, 0.25)
        );
    }
}
