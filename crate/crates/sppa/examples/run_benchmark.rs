//! The stochastic proximal point iteration on the two-scenario benchmark:
//! mean-square decay against the certified bounds, as a table.
//!
//! Run with `cargo run --release --example run_benchmark`.

use sppa::benchmarks;
use sppa::rates::RateCertificate;
use sppa::schedule::Schedule;
use sppa::sim::{monte_carlo, McConfig};

fn main() {
    let dist = benchmarks::euclidean();
    let x0 = benchmarks::euclidean_x0();
    let schedule = Schedule::Harmonic;

    let stats = monte_carlo(
        &dist,
        schedule,
        &x0,
        &McConfig {
            n_steps: 10_000,
            replications: 1_000,
            seed: 2024,
            eps_grid: vec![0.25, 1.0],
        },
    )
    .expect("benchmark runs");
    let cert = RateCertificate::pinned(&dist, &x0, schedule, Some(stats.sigma_measured))
        .expect("certificate constants are positive");

    println!(
        "two scenarios on the line, anchors {{0, 2}}, x* = 1, x0 = 5, harmonic steps, R = 1000"
    );
    println!(
        "certificate: b = {:.9}, c = {:.9}, Λ = {:.9}, C = {:.3}, D = {:.3}",
        cert.b, cert.c, cert.lambda_sq_bound, cert.big_c, cert.big_d
    );
    println!(
        "{:>7} {:>12} {:>12} {:>14} {:>14} {:>12} {:>12}",
        "n", "mean d²", "stderr", "4max{C,D}/ln", "b+cΛ", "P(sup≥0.25)", "P(sup≥1)"
    );
    let l2_cap = cert.b + cert.c * cert.lambda_sq_bound;
    for (i, &n) in stats.logged_n.iter().enumerate() {
        println!(
            "{:>7} {:>12.6} {:>12.2e} {:>14.2} {:>14.3} {:>12.4} {:>12.4}",
            n,
            stats.mean_sq_dist[i],
            stats.stderr[i],
            cert.remark_bound(n),
            l2_cap,
            stats.tail_freq[i][0],
            stats.tail_freq[i][1],
        );
    }
    println!(
        "measured second-moment bound sigma = {:.4}",
        stats.sigma_measured
    );
}
