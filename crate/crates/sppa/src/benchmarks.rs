//! The shipped benchmark scenario sets, one per space model.
//!
//! These are the configurations the verification suites and the acceptance
//! tests run against; JSON copies live in `benchmarks/` for the CLI.

use crate::fields::QuadraticField;
use crate::geometry::Point;
use crate::stochastic::{Scenario, ScenarioDistribution};

/// Two scenarios on the line: anchors `{0, 2}`, `α = 1`, `p = 1/2` each.
/// `x* = 1`, `∫‖φ*‖² dμ = 1`.
pub fn euclidean() -> ScenarioDistribution {
    ScenarioDistribution::new(vec![
        Scenario {
            p: 0.5,
            field: QuadraticField::new(1.0, Point::euclidean(vec![0.0])).unwrap(),
        },
        Scenario {
            p: 0.5,
            field: QuadraticField::new(1.0, Point::euclidean(vec![2.0])).unwrap(),
        },
    ])
    .expect("benchmark is valid")
}

/// Start of the Euclidean benchmark: `x0 = 5`, at distance 4 from `x*`.
pub fn euclidean_x0() -> Point {
    Point::euclidean(vec![5.0])
}

/// Point at arc-length parameter `t` on the axis geodesic
/// `t ↦ (cosh t, sinh t, 0)` of the 2-hyperboloid.
pub fn hyperboloid_axis(t: f64) -> Point {
    Point::hyperboloid(vec![t.cosh(), t.sinh(), 0.0]).expect("axis point is on the sheet")
}

/// The hyperboloid analogue of the Euclidean benchmark: anchors at parameters
/// `{0, 2}` on the axis geodesic, `α = 1`, `p = 1/2` each. `x*` is the
/// midpoint (parameter 1) and `∫‖φ*‖² dμ = 1`.
pub fn hyperboloid() -> ScenarioDistribution {
    ScenarioDistribution::new(vec![
        Scenario {
            p: 0.5,
            field: QuadraticField::new(1.0, hyperboloid_axis(0.0)).unwrap(),
        },
        Scenario {
            p: 0.5,
            field: QuadraticField::new(1.0, hyperboloid_axis(2.0)).unwrap(),
        },
    ])
    .expect("benchmark is valid")
}

/// Start of the hyperboloid benchmark: parameter 5 on the axis, distance 4
/// from `x*`.
pub fn hyperboloid_x0() -> Point {
    hyperboloid_axis(5.0)
}

/// Symmetric spider benchmark: anchors at `r = 1` on each of the three legs,
/// equal weights, `α = 1`. `x*` is the origin, whose tangent cone is not
/// flat; the independence statistic is exploratory there.
pub fn spider() -> ScenarioDistribution {
    ScenarioDistribution::new(
        (0..3)
            .map(|leg| Scenario {
                p: 1.0 / 3.0,
                field: QuadraticField::new(1.0, Point::spider(3, leg, 1.0).unwrap()).unwrap(),
            })
            .collect(),
    )
    .expect("benchmark is valid")
}

/// Start of the spider benchmark: `(leg 0, r = 2)`.
pub fn spider_x0() -> Point {
    Point::spider(3, 0, 2.0).unwrap()
}
