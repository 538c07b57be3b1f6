//! Resolvents of quadratic strongly monotone fields: the closed form against
//! the brute-force oracle, Yosida approximates, and strong monotonicity.
//!
//! Run with `cargo run --release --example resolvents`.

use sppa::fields::{QuadraticField, StronglyMonotoneField};
use sppa::geometry::{distance, Point, Space};
use sppa::stochastic::RngStream;
use sppa::verify::sample_point;

fn main() {
    // prox of f = ½·d²(·, 0) at x = 4 with λ = 1: the midpoint 2.
    let f = QuadraticField::new(1.0, Point::euclidean(vec![0.0])).unwrap();
    let x = Point::euclidean(vec![4.0]);
    let j = f.resolvent(1.0, &x);
    let oracle = f.resolvent_oracle(1.0, &x, 64);
    println!(
        "euclidean: J_1(4) = {}  (oracle {})",
        j.coords()[0],
        oracle.coords()[0]
    );

    // The Yosida approximate lives at the resolvent, points back at x, and
    // has norm d(x, Jx)/λ. For quadratic fields it is exactly the subgradient
    // at the resolvent point.
    let y = f.yosida(1.0, &x);
    println!(
        "  yosida: base {}, magnitude {} (= α·d(Jx, anchor) = {})",
        y.base().coords()[0],
        y.magnitude(),
        f.alpha() * distance(y.base(), f.anchor())
    );

    // A spider resolvent that lands exactly on the glue point.
    let anchor = Point::spider(3, 1, 1.0).unwrap();
    let g = QuadraticField::new(1.0, anchor).unwrap();
    let from = Point::spider(3, 0, 1.0).unwrap();
    let j = g.resolvent(1.0, &from);
    println!(
        "spider: J_1((leg0,1)) with anchor (leg1,1) is the origin: {}",
        j.is_spider_origin()
    );

    // Closed form vs. oracle across random instances in each model.
    for space in [
        Space::Euclidean { dim: 2 },
        Space::Hyperboloid { dim: 2 },
        Space::Spider { legs: 3 },
    ] {
        let mut rng = RngStream::new(11);
        let mut worst = 0.0f64;
        for _ in 0..1_000 {
            let alpha = 0.05 + 0.95 * rng.uniform();
            let field = QuadraticField::new(alpha, sample_point(&space, &mut rng)).unwrap();
            let lambda = 0.05 + 2.95 * rng.uniform();
            let x = sample_point(&space, &mut rng);
            let gap = distance(
                &field.resolvent(lambda, &x),
                &field.resolvent_oracle(lambda, &x, 48),
            );
            worst = worst.max(gap);
        }
        println!("{space}: max closed-form/oracle gap over 10^3 triples = {worst:.3e}");
    }

    // Strong monotonicity defect is never positive; quadratics meet the
    // modulus with equality in flat directions.
    let mut rng = RngStream::new(13);
    let space = Space::Hyperboloid { dim: 2 };
    let mut max_defect = f64::NEG_INFINITY;
    for _ in 0..10_000 {
        let alpha = 0.05 + 0.95 * rng.uniform();
        let field = QuadraticField::new(alpha, sample_point(&space, &mut rng)).unwrap();
        let a = sample_point(&space, &mut rng);
        let b = sample_point(&space, &mut rng);
        max_defect = max_defect.max(field.monotonicity_defect(&a, &b));
    }
    println!(
        "hyperboloid: max strong-monotonicity defect over 10^4 pairs = {max_defect:.3e} (<= 0)"
    );
}
