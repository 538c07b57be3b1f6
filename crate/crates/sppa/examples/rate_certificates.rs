//! Rate certificates: the constants C, D and the mean / almost-sure rates
//! ρ(ε), ρ'(λ, ε) in exact log-space arithmetic, next to what the iteration
//! actually achieves.
//!
//! The certified ρ is double-exponential in 1/ε: a worst-case guarantee over
//! every strongly monotone field, astronomically far above the decay any one
//! field shows. The gap is reported, not reconciled.
//!
//! Run with `cargo run --release --example rate_certificates`.

use sppa::benchmarks;
use sppa::rates::{make_certificate, RateCertificate};
use sppa::schedule::Schedule;
use sppa::sim::{monte_carlo, McConfig};

fn main() {
    // The worked example: b = c = 1, Λ = 2, ᾱ = 1/2.
    let cert = make_certificate(1.0, 1.0, 0.5, 2.0, None).unwrap();
    println!(
        "toy constants: C = {} (= 22), D = {:.4} (= 23·e⁴)",
        cert.big_c, cert.big_d
    );
    let rho = cert.rho(Schedule::Harmonic, 1.0);
    println!(
        "  ρ(1) = θ(χ(1/2c), 2D) = ceil(3·e^{{2D}}): ln ρ = {:.6e}, log10 ρ = {:.6e} ({})",
        rho.ln,
        rho.log10(),
        if rho.is_saturated() {
            "saturated"
        } else {
            "exact"
        }
    );

    // The benchmark certificate.
    let dist = benchmarks::euclidean();
    let x0 = benchmarks::euclidean_x0();
    let cert = RateCertificate::pinned(&dist, &x0, Schedule::Harmonic, None).unwrap();
    println!(
        "\nbenchmark: b = {:.4}, c = {:.4}, C = {:.3}, D = {:.3}",
        cert.b, cert.c, cert.big_c, cert.big_d
    );
    println!(
        "{:>8} {:>14} {:>16} {:>18} {:>18}",
        "eps", "chi(eps/2c)", "log10 rho(eps)", "log10 rho'(.05)", "log10 rho'(.01)"
    );
    for eps in [1.0, 0.5, 0.1, 0.01] {
        println!(
            "{:>8} {:>14} {:>16.4e} {:>18.4e} {:>18.4e}",
            eps,
            Schedule::Harmonic.chi(eps / (2.0 * cert.c)),
            cert.rho(Schedule::Harmonic, eps).log10(),
            cert.rho_prime(Schedule::Harmonic, 0.05, eps).log10(),
            cert.rho_prime(Schedule::Harmonic, 0.01, eps).log10(),
        );
    }

    // What actually happens, for contrast: the mean square distance is
    // already below 1e-3 after a few thousand steps.
    let stats = monte_carlo(
        &dist,
        Schedule::Harmonic,
        &x0,
        &McConfig {
            n_steps: 10_000,
            replications: 200,
            seed: 1,
            eps_grid: vec![1.0],
        },
    )
    .unwrap();
    let last = stats.logged_n.len() - 1;
    println!(
        "\nempirical: mean d²(x_n, x*) = {:.3e} at n = {} — the certificate is a worst-case\n\
         guarantee over every strongly monotone field, not a prediction for this one.",
        stats.mean_sq_dist[last], stats.logged_n[last]
    );
}
