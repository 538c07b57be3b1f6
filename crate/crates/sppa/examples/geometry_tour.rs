//! Tour of the three space models: distances, geodesics, log maps, the
//! tangent-cone calculus, and the quasi-inner product with its
//! Cauchy-Schwarz bound.
//!
//! Run with `cargo run --release --example geometry_tour`.

use sppa::geometry::{
    distance, g_inner, geodesic_point, log_map, quasi_inner, tangent_distance, Point, Space,
};
use sppa::stochastic::RngStream;
use sppa::verify::sample_point;

fn main() {
    // Euclidean plane.
    let x = Point::euclidean(vec![0.0, 0.0]);
    let y = Point::euclidean(vec![3.0, 4.0]);
    println!("euclidean(2):  d((0,0),(3,4)) = {}", distance(&x, &y));
    let mid = geodesic_point(&x, &y, 0.5);
    println!("  midpoint = ({}, {})", mid.coords()[0], mid.coords()[1]);

    // Hyperboloid: points (cosh t, sinh t, 0) sit at parameter t along a
    // geodesic through the pole.
    let h0 = Point::hyperboloid(vec![1.0, 0.0, 0.0]).unwrap();
    let h2 = Point::hyperboloid(vec![2.0f64.cosh(), 2.0f64.sinh(), 0.0]).unwrap();
    println!(
        "hyperboloid(2): d(axis(0), axis(2)) = {}",
        distance(&h0, &h2)
    );
    let m = geodesic_point(&h0, &h2, 0.5);
    println!(
        "  midpoint = ({:.12}, {:.12}, {}) vs (cosh 1, sinh 1, 0)",
        m.coords()[0],
        m.coords()[1],
        m.coords()[2]
    );

    // Spider: three half-lines glued at the origin, the tree metric routes
    // through the glue point.
    let s0 = Point::spider(3, 0, 2.0).unwrap();
    let s1 = Point::spider(3, 1, 3.0).unwrap();
    println!(
        "spider(3):     d((leg0,2),(leg1,3)) = {}",
        distance(&s0, &s1)
    );
    let half = geodesic_point(&s0, &s1, 0.5);
    let (leg, r) = half.ray();
    println!("  halfway point = (leg {leg}, r {r})");

    // Log maps and the cone calculus at the spider origin: distinct legs
    // subtend angle π, so g is maximally negative.
    let origin = Point::spider_origin(3);
    let u = log_map(&origin, &s0);
    let v = log_map(&origin, &s1);
    println!(
        "at the origin: ‖log s0‖ = {}, ‖log s1‖ = {}",
        u.magnitude(),
        v.magnitude()
    );
    println!("  d_x(u, v) = {} (= ‖u‖ + ‖v‖)", tangent_distance(&u, &v));
    println!("  g_x(u, v) = {} (= −‖u‖·‖v‖)", g_inner(&u, &v));

    // Quasi-inner product and the metric Cauchy-Schwarz inequality on random
    // hyperboloid quadruples.
    let space = Space::Hyperboloid { dim: 2 };
    let mut rng = RngStream::new(7);
    let mut worst = f64::INFINITY;
    for _ in 0..10_000 {
        let (a, b, c, d) = (
            sample_point(&space, &mut rng),
            sample_point(&space, &mut rng),
            sample_point(&space, &mut rng),
            sample_point(&space, &mut rng),
        );
        worst = worst.min(distance(&a, &b) * distance(&c, &d) - quasi_inner(&a, &b, &c, &d));
    }
    println!("cauchy-schwarz slack over 10^4 hyperboloid quadruples: min = {worst:.3e} (>= 0)");
}
