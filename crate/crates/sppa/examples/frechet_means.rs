//! Fréchet means (barycenters) in the three models, the zero `x*` of a mean
//! field, and the zero-mean selection `φ*` at `x*`.
//!
//! Run with `cargo run --release --example frechet_means`.

use sppa::benchmarks;
use sppa::geometry::{distance, Point, Space};
use sppa::stochastic::{frechet_mean, frechet_objective};

fn main() {
    // Euclidean: the weighted arithmetic mean.
    let pts = vec![Point::euclidean(vec![0.0]), Point::euclidean(vec![2.0])];
    let m = frechet_mean(&Space::Euclidean { dim: 1 }, &pts, &[0.5, 0.5]);
    println!("euclidean mean of {{0, 2}} = {}", m.coords()[0]);

    // Hyperboloid: fixed-point iteration on the Minkowski weighted average;
    // for two equal weights it is the geodesic midpoint.
    let pts = vec![
        benchmarks::hyperboloid_axis(0.0),
        benchmarks::hyperboloid_axis(2.0),
    ];
    let m = frechet_mean(&Space::Hyperboloid { dim: 2 }, &pts, &[0.5, 0.5]);
    println!(
        "hyperboloid mean of axis(0), axis(2): distance to axis(1) = {:.3e}",
        distance(&m, &benchmarks::hyperboloid_axis(1.0))
    );

    // Spider: symmetric unit points on all three legs pull the mean onto the
    // glue point; tilting the weights moves it up the heavy leg.
    let pts: Vec<Point> = (0..3).map(|l| Point::spider(3, l, 1.0).unwrap()).collect();
    let m = frechet_mean(&Space::Spider { legs: 3 }, &pts, &[1.0 / 3.0; 3]);
    println!(
        "spider mean of three symmetric unit points: origin = {}",
        m.is_spider_origin()
    );
    let m = frechet_mean(&Space::Spider { legs: 3 }, &pts[..2], &[0.9, 0.1]);
    let (leg, r) = m.ray();
    println!("spider mean with weights (0.9, 0.1) on legs 0,1: (leg {leg}, r {r})");
    println!(
        "  objective there = {:.6}, at origin = {:.6}",
        frechet_objective(&m, &pts[..2], &[0.9, 0.1]),
        frechet_objective(&Point::spider_origin(3), &pts[..2], &[0.9, 0.1])
    );

    // The zero of a mean field is the Fréchet mean of the anchors with
    // weights p·α/ᾱ; the subgradients at x* average to the cone apex.
    for (name, dist) in [
        ("euclidean", benchmarks::euclidean()),
        ("hyperboloid", benchmarks::hyperboloid()),
        ("spider", benchmarks::spider()),
    ] {
        let x_star = dist.zero_of_mean().expect("assumptions hold");
        let phi = dist.phi_star(&x_star).expect("zero-mean selection exists");
        println!(
            "{name} benchmark: second moment of phi* = {} (mean modulus {})",
            phi.second_moment(&dist),
            dist.mean_modulus()
        );
    }
}
