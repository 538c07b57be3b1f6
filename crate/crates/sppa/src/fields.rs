//! Strongly monotone vector fields per scenario.
//!
//! The shipped field class is quadratic: `f(x) = (α/2)·d²(x, z)` with modulus
//! `α ∈ (0, 1]` and anchor `z`. Its subdifferential is strongly monotone with
//! constant `α`, its unique zero is the anchor, and its resolvent (the
//! proximal map of `f`) has a closed form in every Hadamard space: the
//! minimizer of `f(y) + d²(x,y)/(2λ)` lies on the geodesic `[x, z]` at
//! parameter `t = λα/(1 + λα)`, because for any `y` with `a = d(x,y)`,
//! `b = d(y,z)` the objective only improves by replacing `y` with the
//! geodesic point realizing the split `(a, b)` with `a + b = d(x,z)`.
//!
//! [`QuadraticField::resolvent_oracle`] is an independent brute-force check of
//! that closed form (grid search plus ternary refinement of the proximal
//! objective along the geodesic); the test suites compare the two routes.
//!
//! The trait [`StronglyMonotoneField`] is the abstract contract so other
//! strongly monotone fields can be plugged in; only the quadratic instance
//! ships.

use serde::{Deserialize, Serialize};

use crate::geometry::{
    distance, g_inner, geodesic_point, log_map, AxisDir, Point, Space, Tangent, TangentDir,
};
use crate::{Error, Result};

/// Contract for a single-valued selection of a strongly monotone field:
/// modulus, canonical subgradient selection, and resolvent.
pub trait StronglyMonotoneField {
    /// Strong monotonicity modulus `α ∈ (0, 1]`.
    fn modulus(&self) -> f64;
    /// Canonical selection `u ∈ A(x)`.
    fn subgradient(&self, x: &Point) -> Tangent;
    /// Resolvent `J_λ x`: the unique `z` with `(1/λ)·log_z x ∈ A(z)`.
    fn resolvent(&self, lambda: f64, x: &Point) -> Point;
}

/// `f(x) = (α/2)·d²(x, anchor)`, strongly convex with constant `α`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticField {
    alpha: f64,
    anchor: Point,
}

impl QuadraticField {
    pub fn new(alpha: f64, anchor: Point) -> Result<QuadraticField> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Config(format!(
                "field modulus must lie in (0, 1], got {alpha}"
            )));
        }
        Ok(QuadraticField { alpha, anchor })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn anchor(&self) -> &Point {
        &self.anchor
    }

    pub fn space(&self) -> Space {
        self.anchor.space()
    }

    /// `f(x) = (α/2)·d²(x, anchor)`.
    pub fn value(&self, x: &Point) -> f64 {
        let d = distance(x, &self.anchor);
        0.5 * self.alpha * d * d
    }

    /// Independent brute-force resolvent: minimizes `f(y) + d²(x,y)/(2λ)` by
    /// grid search along the geodesic from `x` to the anchor, then ternary
    /// refinement. `resolution` is the grid size (≥ 2). Sixty refinement
    /// rounds shrink the bracket by (2/3)^60 ≈ 3e-11 of a grid cell.
    pub fn resolvent_oracle(&self, lambda: f64, x: &Point, resolution: usize) -> Point {
        assert!(
            lambda > 0.0,
            "resolvent parameter must be positive, got {lambda}"
        );
        assert!(resolution >= 2, "oracle grid resolution must be >= 2");
        let objective = |t: f64| {
            let y = geodesic_point(x, &self.anchor, t);
            let dxy = distance(x, &y);
            self.value(&y) + dxy * dxy / (2.0 * lambda)
        };
        let mut best_i = 0usize;
        let mut best = f64::INFINITY;
        for i in 0..=resolution {
            let v = objective(i as f64 / resolution as f64);
            if v < best {
                best = v;
                best_i = i;
            }
        }
        let mut lo = best_i.saturating_sub(1) as f64 / resolution as f64;
        let mut hi = ((best_i + 1).min(resolution)) as f64 / resolution as f64;
        for _ in 0..60 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if objective(m1) <= objective(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        geodesic_point(x, &self.anchor, 0.5 * (lo + hi))
    }

    /// Yosida approximate `A_λ x = (1/λ)·log_{J_λ x} x`: based at the
    /// resolvent, magnitude `d(x, J_λ x)/λ`, pointing back toward `x`.
    pub fn yosida(&self, lambda: f64, x: &Point) -> Tangent {
        assert!(
            lambda > 0.0,
            "resolvent parameter must be positive, got {lambda}"
        );
        let j = self.resolvent(lambda, x);
        log_map(&j, x).scaled(1.0 / lambda)
    }

    /// Norm of the Yosida approximate without building the tangent:
    /// `d(x, J_λ x)/λ = α·d(x, anchor)/(1 + λα)`.
    pub fn yosida_norm(&self, lambda: f64, x: &Point) -> f64 {
        assert!(lambda > 0.0);
        self.alpha * distance(x, &self.anchor) / (1.0 + lambda * self.alpha)
    }

    /// Strong-monotonicity defect
    /// `g_x(u, log_x y) + g_y(v, log_y x) + α·d²(x,y)` for the canonical
    /// subgradients `u, v` at `x, y`; `≤ 0` (up to rounding) for every pair.
    pub fn monotonicity_defect(&self, x: &Point, y: &Point) -> f64 {
        let u = self.subgradient(x);
        let v = self.subgradient(y);
        let d = distance(x, y);
        g_inner(&u, &log_map(x, y)) + g_inner(&v, &log_map(y, x)) + self.alpha * d * d
    }
}

impl StronglyMonotoneField for QuadraticField {
    fn modulus(&self) -> f64 {
        self.alpha
    }

    /// The canonical selection `u ∈ ∂f(x)`: magnitude `α·d(x, z)`, direction
    /// opposite `log_x z`. At a spider interior point the axis flips; at the
    /// spider origin the cone has no reversal of the anchor's leg, but any
    /// other leg with magnitude `α·d` satisfies the subgradient inequality
    /// (equality on the anchor leg, slack elsewhere), and we pick
    /// `(leg + 1) mod K`.
    fn subgradient(&self, x: &Point) -> Tangent {
        let to_anchor = log_map(x, &self.anchor);
        let magnitude = self.alpha * to_anchor.magnitude();
        if magnitude == 0.0 {
            return Tangent::zero(x.clone());
        }
        let dir = match to_anchor.dir() {
            TangentDir::Vector(v) => TangentDir::Vector(v.iter().map(|c| -c).collect()),
            TangentDir::Axis(AxisDir::TowardLeaf) => TangentDir::Axis(AxisDir::TowardOrigin),
            TangentDir::Axis(AxisDir::TowardOrigin) => TangentDir::Axis(AxisDir::TowardLeaf),
            TangentDir::Leg(j) => {
                let Space::Spider { legs } = x.space() else {
                    unreachable!()
                };
                TangentDir::Leg((j + 1) % legs)
            }
            TangentDir::Zero => unreachable!("nonzero magnitude with zero direction"),
        };
        Tangent::new(x.clone(), dir, magnitude)
    }

    /// Closed form: `geodesic_point(x, anchor, λα/(1 + λα))`.
    fn resolvent(&self, lambda: f64, x: &Point) -> Point {
        assert!(
            lambda > 0.0,
            "resolvent parameter must be positive, got {lambda}"
        );
        let t = lambda * self.alpha / (1.0 + lambda * self.alpha);
        geodesic_point(x, &self.anchor, t)
    }
}

/// Residual of the defining inclusion of the resolvent at `z = J_λ x`: the
/// worst violation of the subgradient inequality by `u = (1/λ)·log_z x` over
/// the probe points, `max_y (f(z) + g_z(u, log_z y) − f(y))`. Nonpositive (up
/// to rounding) exactly when `u ∈ ∂f(z)`. Membership is tested through the
/// inequality rather than against the canonical selection because the
/// subdifferential at the spider origin has several members.
pub fn resolvent_inclusion_residual(
    field: &QuadraticField,
    lambda: f64,
    x: &Point,
    z: &Point,
    probes: &[Point],
) -> f64 {
    let u = log_map(z, x).scaled(1.0 / lambda);
    let f_z = field.value(z);
    probes
        .iter()
        .map(|y| f_z + g_inner(&u, &log_map(z, y)) - field.value(y))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tangent_distance;

    fn e1(x: f64) -> Point {
        Point::euclidean(vec![x])
    }

    fn scalar_field(alpha: f64, z: f64) -> QuadraticField {
        QuadraticField::new(alpha, e1(z)).unwrap()
    }

    fn axis_point(t: f64) -> Point {
        Point::hyperboloid(vec![t.cosh(), t.sinh(), 0.0]).unwrap()
    }

    #[test]
    fn modulus_range_enforced() {
        assert!(QuadraticField::new(0.0, e1(0.0)).is_err());
        assert!(QuadraticField::new(1.5, e1(0.0)).is_err());
        assert!(QuadraticField::new(1.0, e1(0.0)).is_ok());
    }

    #[test]
    fn scalar_subgradient_is_gradient() {
        let f = scalar_field(1.0, 0.0);
        let u = f.subgradient(&e1(3.0));
        assert_eq!(u.magnitude(), 3.0);
        match u.dir() {
            TangentDir::Vector(v) => assert_eq!(v[0], 1.0),
            d => panic!("unexpected {d:?}"),
        }
    }

    #[test]
    fn subgradient_at_minimizer_is_apex() {
        for (f, x) in [
            (scalar_field(0.7, 2.0), e1(2.0)),
            (
                QuadraticField::new(0.5, axis_point(1.0)).unwrap(),
                axis_point(1.0),
            ),
        ] {
            assert!(f.subgradient(&x).is_zero());
        }
    }

    #[test]
    fn hyperboloid_subgradient_magnitude_and_direction() {
        let f = QuadraticField::new(0.5, axis_point(0.0)).unwrap();
        let x = axis_point(1.0);
        let u = f.subgradient(&x);
        assert!((u.magnitude() - 0.5).abs() < 1e-12);
        // Points away from the anchor: g(u, log_x anchor) = -‖u‖·d.
        let toward = log_map(&x, f.anchor());
        assert!((g_inner(&u, &toward) + 0.5 * 1.0).abs() < 1e-12);
    }

    /// Subgradient inequality f(y) >= f(x) + g_x(u, log_x y) over sampled y,
    /// including the spider origin with its reassigned-leg selection.
    #[test]
    fn subgradient_inequality_spider_origin() {
        let anchor = Point::spider(3, 1, 1.0).unwrap();
        let f = QuadraticField::new(1.0, anchor).unwrap();
        let o = Point::spider_origin(3);
        let u = f.subgradient(&o);
        assert_eq!(*u.dir(), TangentDir::Leg(2));
        assert_eq!(u.magnitude(), 1.0);
        for leg in 0..3 {
            for k in 0..40 {
                let y = Point::spider(3, leg, k as f64 * 0.1).unwrap();
                let slack = f.value(&y) - f.value(&o) - g_inner(&u, &log_map(&o, &y));
                assert!(slack >= -1e-12, "violated at leg {leg}, k {k}: {slack}");
            }
        }
    }

    #[test]
    fn scalar_resolvent_matches_oracle() {
        let f = scalar_field(1.0, 0.0);
        let j = f.resolvent(1.0, &e1(4.0));
        assert!((j.coords()[0] - 2.0).abs() < 1e-15);
        let oracle = f.resolvent_oracle(1.0, &e1(4.0), 64);
        assert!(distance(&j, &oracle) <= 1e-6);
    }

    #[test]
    fn resolvent_fixes_the_anchor() {
        let f = scalar_field(0.3, 1.5);
        let j = f.resolvent(2.0, &e1(1.5));
        assert_eq!(distance(&j, f.anchor()), 0.0);
    }

    #[test]
    fn spider_resolvent_reaches_origin() {
        let anchor = Point::spider(3, 1, 1.0).unwrap();
        let f = QuadraticField::new(1.0, anchor).unwrap();
        let x = Point::spider(3, 0, 1.0).unwrap();
        let j = f.resolvent(1.0, &x);
        assert!(j.is_spider_origin());
        let oracle = f.resolvent_oracle(1.0, &x, 64);
        assert!(distance(&j, &oracle) <= 1e-6);
    }

    #[test]
    fn hyperboloid_resolvent_distance_split() {
        // t = λα/(1+λα) = 1/2 at λ=2, α=0.5: the resolvent sits at distance
        // 1.5 from an anchor 3 away.
        let f = QuadraticField::new(0.5, axis_point(0.0)).unwrap();
        let x = axis_point(3.0);
        let j = f.resolvent(2.0, &x);
        assert!((distance(&j, f.anchor()) - 1.5).abs() < 1e-10);
        let oracle = f.resolvent_oracle(2.0, &x, 64);
        assert!(distance(&j, &oracle) <= 1e-6);
    }

    #[test]
    fn resolvent_inclusion_holds() {
        let f = scalar_field(0.8, -1.0);
        let x = e1(3.0);
        let j = f.resolvent(0.7, &x);
        let probes: Vec<Point> = (-40..=40).map(|k| e1(0.2 * k as f64)).collect();
        assert!(resolvent_inclusion_residual(&f, 0.7, &x, &j, &probes) <= 1e-12);

        // Resolvent landing exactly on the spider origin: the inclusion holds
        // through a non-canonical member of the subdifferential there.
        let anchor = Point::spider(3, 1, 1.0).unwrap();
        let g = QuadraticField::new(1.0, anchor).unwrap();
        let x = Point::spider(3, 0, 1.0).unwrap();
        let j = g.resolvent(1.0, &x);
        assert!(j.is_spider_origin());
        let probes: Vec<Point> = (0..3)
            .flat_map(|leg| (0..30).map(move |k| Point::spider(3, leg, 0.1 * k as f64).unwrap()))
            .collect();
        assert!(resolvent_inclusion_residual(&g, 1.0, &x, &j, &probes) <= 1e-12);
    }

    #[test]
    #[should_panic(expected = "must be positive")]
    fn resolvent_rejects_nonpositive_lambda() {
        scalar_field(1.0, 0.0).resolvent(0.0, &e1(1.0));
    }

    #[test]
    #[should_panic(expected = "resolution must be >= 2")]
    fn oracle_rejects_tiny_resolution() {
        scalar_field(1.0, 0.0).resolvent_oracle(1.0, &e1(1.0), 1);
    }

    #[test]
    fn yosida_scalar_example() {
        let f = scalar_field(1.0, 0.0);
        let y = f.yosida(1.0, &e1(4.0));
        assert!((y.base().coords()[0] - 2.0).abs() < 1e-15);
        assert!((y.magnitude() - 2.0).abs() < 1e-15);
        match y.dir() {
            TangentDir::Vector(v) => assert_eq!(v[0], 1.0),
            d => panic!("unexpected {d:?}"),
        }
    }

    #[test]
    fn yosida_at_anchor_is_apex() {
        let f = scalar_field(0.5, 2.0);
        let y = f.yosida(3.0, &e1(2.0));
        assert!(y.is_zero());
        assert_eq!(distance(y.base(), f.anchor()), 0.0);
    }

    #[test]
    fn yosida_norm_consistency() {
        // ‖A_λ x‖ = d(x, J_λ x)/λ = α d(J_λ x, anchor): the Yosida approximate
        // is itself the subgradient at the resolvent point.
        let f = scalar_field(1.0, 0.0);
        let x = e1(4.0);
        for &lambda in &[0.25, 1.0, 3.0] {
            let y = f.yosida(lambda, &x);
            let expect = 4.0 / (1.0 + lambda);
            assert!((y.magnitude() - expect).abs() < 1e-12);
            assert!((f.yosida_norm(lambda, &x) - expect).abs() < 1e-12);
            let sub = f.subgradient(y.base());
            assert!(tangent_distance(&y, &sub) <= 1e-12);
        }
    }

    #[test]
    fn monotonicity_defect_examples() {
        let f = scalar_field(1.0, 0.0);
        assert_eq!(f.monotonicity_defect(&e1(2.0), &e1(2.0)), 0.0);
        // Scalar oracle (x−z)(y−x) + (y−z)(x−y) + α(x−y)² at x=1, y=−1, z=0:
        // the quadratic field meets strong monotonicity with equality.
        let (x, y, z, a) = (1.0, -1.0, 0.0, 1.0);
        let oracle = (x - z) * (y - x) + (y - z) * (x - y) + a * (x - y) * (x - y);
        assert_eq!(oracle, 0.0);
        assert_eq!(f.monotonicity_defect(&e1(1.0), &e1(-1.0)), oracle);
    }

    #[test]
    fn monotonicity_defect_nonpositive_on_hyperboloid() {
        let f = QuadraticField::new(0.8, axis_point(0.5)).unwrap();
        let x = Point::hyperboloid_from_spatial(&[1.0, -0.5]);
        let y = Point::hyperboloid_from_spatial(&[-0.3, 2.0]);
        assert!(f.monotonicity_defect(&x, &y) <= 1e-9);
    }
}
