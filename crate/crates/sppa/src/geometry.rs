//! Three concrete separable Hadamard-space models and their tangent-cone
//! calculus.
//!
//! The models:
//!
//! - `Euclidean(dim)` — `R^dim` with the `ℓ2` metric;
//! - `Hyperboloid(dim)` — the upper sheet `{x ∈ R^{dim+1} : ⟨x,x⟩_L = −1,
//!   x_0 > 0}` of the two-sheeted hyperboloid, where
//!   `⟨x,y⟩_L = −x_0 y_0 + Σ_{i≥1} x_i y_i` is the Minkowski form, with
//!   `d(x,y) = arccosh(−⟨x,y⟩_L)`;
//! - `Spider(K)` — `K ≥ 3` half-lines glued at a common origin with the tree
//!   metric (`|r_x − r_y|` on a shared leg, `r_x + r_y` across legs). All
//!   points with `r = 0` are the same origin.
//!
//! A [`Tangent`] is a base-pointed element of the tangent cone `T_xX`: a
//! direction datum plus a magnitude `t ≥ 0`, with cone metric
//! `d_x(tγ, sη) = sqrt(t² + s² − 2ts·cos∠(γ,η))` and cone inner product
//! `g_x(tγ, sη) = ts·cos∠(γ,η)`. On the vector models `cos∠` is the (Minkowski)
//! dot product of unit directions. On the spider, two distinct legs at the
//! origin subtend angle π (`cos = −1`), and the tangent cone at an interior
//! point is one-dimensional: every geodesic leaving the point either heads
//! toward the leaf or toward the origin, and all origin-crossing geodesics
//! share their initial segment, so they subtend angle 0.
//!
//! Magnitude zero always means the cone apex `0_x`, regardless of direction
//! datum; constructors canonicalize this.
//!
//! Everything here is immutable after construction and all operations are
//! pure functions; unrestricted parallel use is safe.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Tolerance for membership in a model (hyperboloid sheet constraint, spider
/// radius nonnegativity).
pub const MODEL_TOL: f64 = 1e-10;

// ---------------------------------------------------------------------------
// Spaces and points
// ---------------------------------------------------------------------------

/// One of the three shipped Hadamard-space models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Space {
    Euclidean { dim: usize },
    Hyperboloid { dim: usize },
    Spider { legs: usize },
}

impl Space {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Space::Euclidean { dim } | Space::Hyperboloid { dim } => {
                if dim == 0 {
                    return Err(Error::Config("space dimension must be positive".into()));
                }
            }
            Space::Spider { legs } => {
                if legs < 3 {
                    return Err(Error::Config("spider needs at least 3 legs".into()));
                }
            }
        }
        Ok(())
    }

    /// Length of the coordinate vector for the vector-valued models.
    fn ambient_len(&self) -> usize {
        match *self {
            Space::Euclidean { dim } => dim,
            Space::Hyperboloid { dim } => dim + 1,
            Space::Spider { .. } => unreachable!("spider points are (leg, r) pairs"),
        }
    }
}

impl std::fmt::Display for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Space::Euclidean { dim } => write!(f, "euclidean({dim})"),
            Space::Hyperboloid { dim } => write!(f, "hyperboloid({dim})"),
            Space::Spider { legs } => write!(f, "spider({legs})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum PointData {
    /// Euclidean or hyperboloid ambient coordinates.
    Vector(Vec<f64>),
    /// Spider point: leg index and radius. The origin is canonicalized to
    /// `leg = 0, r = 0`.
    Ray { leg: usize, r: f64 },
}

/// An element of one of the three space models.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    space: Space,
    data: PointData,
}

impl Point {
    /// Point of `Euclidean(coords.len())`.
    pub fn euclidean(coords: Vec<f64>) -> Point {
        assert!(!coords.is_empty(), "euclidean point needs coordinates");
        Point {
            space: Space::Euclidean { dim: coords.len() },
            data: PointData::Vector(coords),
        }
    }

    /// Point of `Hyperboloid(coords.len() - 1)`; validates the sheet
    /// constraint `⟨x,x⟩_L = −1`, `x_0 > 0` to within [`MODEL_TOL`].
    pub fn hyperboloid(coords: Vec<f64>) -> Result<Point> {
        if coords.len() < 2 {
            return Err(Error::Config(
                "hyperboloid point needs at least 2 coordinates".into(),
            ));
        }
        let q = mdot(&coords, &coords);
        if (q + 1.0).abs() > MODEL_TOL {
            return Err(Error::Config(format!(
                "point is off the hyperboloid sheet: <x,x>_L = {q}"
            )));
        }
        if coords[0] <= 0.0 {
            return Err(Error::Config("hyperboloid point must have x_0 > 0".into()));
        }
        Ok(Point {
            space: Space::Hyperboloid {
                dim: coords.len() - 1,
            },
            data: PointData::Vector(coords),
        })
    }

    /// Hyperboloid point from spatial coordinates, lifting to the sheet via
    /// `x_0 = sqrt(1 + |v|²)`.
    pub fn hyperboloid_from_spatial(spatial: &[f64]) -> Point {
        assert!(!spatial.is_empty(), "need at least one spatial coordinate");
        let norm_sq: f64 = spatial.iter().map(|v| v * v).sum();
        let mut coords = Vec::with_capacity(spatial.len() + 1);
        coords.push((1.0 + norm_sq).sqrt());
        coords.extend_from_slice(spatial);
        Point {
            space: Space::Hyperboloid { dim: spatial.len() },
            data: PointData::Vector(coords),
        }
    }

    /// Spider point `(leg, r)`. `r = 0` is canonicalized to the origin.
    pub fn spider(legs: usize, leg: usize, r: f64) -> Result<Point> {
        let space = Space::Spider { legs };
        space.validate()?;
        if leg >= legs {
            return Err(Error::Config(format!("leg {leg} out of range for {space}")));
        }
        if r < -MODEL_TOL || !r.is_finite() {
            return Err(Error::Config(format!(
                "spider radius must be >= 0, got {r}"
            )));
        }
        let r = r.max(0.0);
        Ok(Point {
            space,
            data: PointData::Ray {
                leg: if r == 0.0 { 0 } else { leg },
                r,
            },
        })
    }

    /// The glue point of a spider.
    pub fn spider_origin(legs: usize) -> Point {
        Point::spider(legs, 0, 0.0).expect("origin is always valid")
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Ambient coordinates (Euclidean / hyperboloid models only).
    pub fn coords(&self) -> &[f64] {
        match &self.data {
            PointData::Vector(v) => v,
            PointData::Ray { .. } => panic!("spider points have no coordinate vector"),
        }
    }

    /// `(leg, r)` of a spider point.
    pub fn ray(&self) -> (usize, f64) {
        match self.data {
            PointData::Ray { leg, r } => (leg, r),
            PointData::Vector(_) => panic!("not a spider point"),
        }
    }

    pub fn is_spider_origin(&self) -> bool {
        matches!(self.data, PointData::Ray { r, .. } if r == 0.0)
    }
}

// ---------------------------------------------------------------------------
// Minkowski helpers (hyperboloid model)
// ---------------------------------------------------------------------------

/// Minkowski form `⟨a,b⟩_L = −a_0 b_0 + Σ_{i≥1} a_i b_i`.
fn mdot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = -a[0] * b[0];
    for i in 1..a.len() {
        s += a[i] * b[i];
    }
    s
}

/// `⟨x−y, x−y⟩_L`, formed from coordinate differences. For nearby points this
/// is far better conditioned than `−2 − 2⟨x,y⟩_L`.
fn mdiff_sq(x: &[f64], y: &[f64]) -> f64 {
    let mut s = -(x[0] - y[0]) * (x[0] - y[0]);
    for i in 1..x.len() {
        s += (x[i] - y[i]) * (x[i] - y[i]);
    }
    s
}

/// Scale back onto the sheet (`⟨x,x⟩_L = −1`, `x_0 > 0`). Applied after every
/// geodesic-style computation to stop drift over long iterations.
fn renormalize_sheet(v: &mut [f64]) {
    let q = mdot(v, v);
    assert!(q < 0.0, "cannot renormalize a non-timelike vector");
    let scale = 1.0 / (-q).sqrt();
    for c in v.iter_mut() {
        *c *= scale;
    }
    if v[0] < 0.0 {
        for c in v.iter_mut() {
            *c = -*c;
        }
    }
}

/// `cosh(d) − 1` without cancellation for small `d`.
fn coshm1(d: f64) -> f64 {
    let e = (d / 2.0).sinh();
    2.0 * e * e
}

/// `arccosh(1 + delta)` for `delta ≥ 0`, stable near zero.
fn acosh1p(delta: f64) -> f64 {
    let delta = delta.max(0.0);
    (delta + (delta * (delta + 2.0)).sqrt()).ln_1p()
}

// ---------------------------------------------------------------------------
// Distance and geodesics
// ---------------------------------------------------------------------------

fn assert_same_space(a: &Point, b: &Point, op: &str) {
    assert!(
        a.space == b.space,
        "{op}: mixed spaces {} and {}",
        a.space,
        b.space
    );
}

/// Geodesic distance of the model.
pub fn distance(x: &Point, y: &Point) -> f64 {
    assert_same_space(x, y, "distance");
    match x.space {
        Space::Euclidean { .. } => {
            let (a, b) = (x.coords(), y.coords());
            a.iter()
                .zip(b)
                .map(|(p, q)| (p - q) * (p - q))
                .sum::<f64>()
                .sqrt()
        }
        Space::Hyperboloid { .. } => {
            // d = arccosh(−⟨x,y⟩_L); −⟨x,y⟩_L = 1 + ⟨x−y,x−y⟩_L / 2.
            acosh1p(mdiff_sq(x.coords(), y.coords()) / 2.0)
        }
        Space::Spider { .. } => {
            let (lx, rx) = x.ray();
            let (ly, ry) = y.ray();
            if lx == ly || rx == 0.0 || ry == 0.0 {
                (rx - ry).abs()
            } else {
                rx + ry
            }
        }
    }
}

/// The point `γ_{x,y}(t·d(x,y))` on the unique geodesic from `x` to `y`,
/// `t ∈ [0,1]`.
pub fn geodesic_point(x: &Point, y: &Point, t: f64) -> Point {
    assert_same_space(x, y, "geodesic_point");
    assert!(
        (0.0..=1.0).contains(&t),
        "geodesic parameter t={t} not in [0,1]"
    );
    if t == 0.0 {
        return x.clone();
    }
    if t == 1.0 {
        return y.clone();
    }
    match x.space {
        Space::Euclidean { .. } => {
            let coords = x
                .coords()
                .iter()
                .zip(y.coords())
                .map(|(a, b)| a + t * (b - a))
                .collect();
            Point {
                space: x.space,
                data: PointData::Vector(coords),
            }
        }
        Space::Hyperboloid { .. } => {
            let d = distance(x, y);
            if d < 1e-12 {
                return x.clone();
            }
            // γ(td) = (sinh((1−t)d)·x + sinh(td)·y) / sinh(d)
            let denom = d.sinh();
            let wx = ((1.0 - t) * d).sinh() / denom;
            let wy = (t * d).sinh() / denom;
            let mut coords: Vec<f64> = x
                .coords()
                .iter()
                .zip(y.coords())
                .map(|(a, b)| wx * a + wy * b)
                .collect();
            renormalize_sheet(&mut coords);
            Point {
                space: x.space,
                data: PointData::Vector(coords),
            }
        }
        Space::Spider { legs } => {
            let (lx, rx) = x.ray();
            let (ly, ry) = y.ray();
            let same_ray = lx == ly || rx == 0.0 || ry == 0.0;
            if same_ray {
                let leg = if rx > 0.0 { lx } else { ly };
                let r = rx + t * (ry - rx);
                Point::spider(legs, leg, r).expect("interpolant stays on the leg")
            } else {
                // Through the origin: arc length s = t(rx + ry).
                let s = t * (rx + ry);
                if s <= rx {
                    Point::spider(legs, lx, rx - s).expect("on leg of x")
                } else {
                    Point::spider(legs, ly, s - rx).expect("on leg of y")
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Tangent cone
// ---------------------------------------------------------------------------

/// Which way a spider tangent at an interior point heads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisDir {
    TowardLeaf,
    TowardOrigin,
}

/// Direction datum of a [`Tangent`], encoding the equivalence class of
/// geodesics issuing from the base point.
#[derive(Clone, Debug, PartialEq)]
pub enum TangentDir {
    /// The cone apex `0_x` (magnitude zero).
    Zero,
    /// Unit vector: `ℓ2`-unit for Euclidean, Minkowski-unit in the tangent
    /// hyperplane of the base for the hyperboloid.
    Vector(Vec<f64>),
    /// Spider tangent at the origin: along leg `k`.
    Leg(usize),
    /// Spider tangent at an interior point.
    Axis(AxisDir),
}

/// Base-pointed tangent-cone element: base, direction, magnitude `≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tangent {
    base: Point,
    magnitude: f64,
    dir: TangentDir,
}

impl Tangent {
    /// The cone apex `0_x`.
    pub fn zero(base: Point) -> Tangent {
        Tangent {
            base,
            magnitude: 0.0,
            dir: TangentDir::Zero,
        }
    }

    /// Tangent with an explicit direction datum. The direction must fit the
    /// base's model (vector length, leg range, interior vs. origin); vectors
    /// are normalized here. Magnitude zero collapses to `0_x`.
    pub fn new(base: Point, dir: TangentDir, magnitude: f64) -> Tangent {
        assert!(
            magnitude.is_finite() && magnitude >= 0.0,
            "tangent magnitude must be finite and >= 0"
        );
        if magnitude == 0.0 {
            return Tangent::zero(base);
        }
        let dir = match (&base.space, dir) {
            (Space::Euclidean { .. } | Space::Hyperboloid { .. }, TangentDir::Vector(mut v)) => {
                assert_eq!(
                    v.len(),
                    base.space.ambient_len(),
                    "direction length mismatch"
                );
                let norm = match base.space {
                    Space::Euclidean { .. } => v.iter().map(|c| c * c).sum::<f64>().sqrt(),
                    _ => {
                        // Project into the tangent hyperplane at the base and
                        // take the Minkowski norm (positive definite there).
                        let b = base.coords();
                        let inner = mdot(b, &v);
                        for (vi, bi) in v.iter_mut().zip(b) {
                            *vi += inner * bi;
                        }
                        mdot(&v, &v).sqrt()
                    }
                };
                assert!(norm > 0.0, "zero direction vector with nonzero magnitude");
                for c in v.iter_mut() {
                    *c /= norm;
                }
                TangentDir::Vector(v)
            }
            (Space::Spider { legs }, TangentDir::Leg(k)) => {
                assert!(base.is_spider_origin(), "leg directions only at the origin");
                assert!(k < *legs, "leg index out of range");
                TangentDir::Leg(k)
            }
            (Space::Spider { .. }, TangentDir::Axis(a)) => {
                assert!(
                    !base.is_spider_origin(),
                    "axis directions only at interior points"
                );
                TangentDir::Axis(a)
            }
            (_, d) => panic!("direction datum {d:?} does not fit space {}", base.space),
        };
        Tangent {
            base,
            magnitude,
            dir,
        }
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    /// `‖u‖_x`; equals the stored magnitude exactly.
    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn dir(&self) -> &TangentDir {
        &self.dir
    }

    pub fn is_zero(&self) -> bool {
        self.magnitude == 0.0
    }

    /// Cone scaling `k·u`, `k ≥ 0`.
    pub fn scaled(&self, k: f64) -> Tangent {
        assert!(k >= 0.0, "cone scaling needs k >= 0");
        if k == 0.0 {
            return Tangent::zero(self.base.clone());
        }
        Tangent {
            base: self.base.clone(),
            magnitude: self.magnitude * k,
            dir: self.dir.clone(),
        }
    }

    /// Same direction, new magnitude.
    pub fn with_magnitude(&self, magnitude: f64) -> Tangent {
        assert!(magnitude >= 0.0);
        if magnitude == 0.0 || self.is_zero() {
            return Tangent::zero(self.base.clone());
        }
        Tangent {
            base: self.base.clone(),
            magnitude,
            dir: self.dir.clone(),
        }
    }
}

/// `‖u‖_x = d_x(0_x, u)`.
pub fn tangent_norm(u: &Tangent) -> f64 {
    u.magnitude
}

/// `log_x a`: magnitude `d(x,a)`, direction of the geodesic from `x` toward
/// `a`; `log_x x = 0_x`.
pub fn log_map(x: &Point, a: &Point) -> Tangent {
    assert_same_space(x, a, "log_map");
    let d = distance(x, a);
    if d == 0.0 {
        return Tangent::zero(x.clone());
    }
    let dir = match x.space {
        Space::Euclidean { .. } => {
            let v = x
                .coords()
                .iter()
                .zip(a.coords())
                .map(|(p, q)| (q - p) / d)
                .collect();
            TangentDir::Vector(v)
        }
        Space::Hyperboloid { .. } => {
            // Unit initial velocity (a − cosh(d)·x)/sinh(d); form the numerator
            // as (a − x) − (cosh d − 1)·x to keep small-d precision, project
            // exactly onto the tangent hyperplane, then normalize.
            let cm1 = coshm1(d);
            let xb = x.coords();
            let mut v: Vec<f64> = xb
                .iter()
                .zip(a.coords())
                .map(|(p, q)| (q - p) - cm1 * p)
                .collect();
            let inner = mdot(xb, &v);
            for (vi, bi) in v.iter_mut().zip(xb) {
                *vi += inner * bi;
            }
            let norm = mdot(&v, &v).sqrt();
            for c in v.iter_mut() {
                *c /= norm;
            }
            TangentDir::Vector(v)
        }
        Space::Spider { .. } => {
            let (lx, rx) = x.ray();
            let (la, ra) = a.ray();
            if rx == 0.0 {
                TangentDir::Leg(la)
            } else if la == lx && ra > rx {
                TangentDir::Axis(AxisDir::TowardLeaf)
            } else {
                // Same leg below x, the origin itself, or another leg: the
                // geodesic leaves x heading for the origin.
                TangentDir::Axis(AxisDir::TowardOrigin)
            }
        }
    };
    Tangent {
        base: x.clone(),
        magnitude: d,
        dir,
    }
}

/// `cos` of the Aleksandrov angle between the direction data of two tangents
/// at a common base. Only meaningful when both magnitudes are positive.
fn cos_angle(u: &Tangent, v: &Tangent) -> f64 {
    if u.dir == v.dir {
        // Exact for identical directions, so d_x(u, u) = 0 and
        // g_x(u, u) = ‖u‖² hold without rounding.
        return 1.0;
    }
    match (&u.dir, &v.dir) {
        (TangentDir::Zero, _) | (_, TangentDir::Zero) => 1.0,
        (TangentDir::Vector(a), TangentDir::Vector(b)) => {
            let c = match u.base.space {
                Space::Euclidean { .. } => a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>(),
                Space::Hyperboloid { .. } => mdot(a, b),
                Space::Spider { .. } => unreachable!(),
            };
            c.clamp(-1.0, 1.0)
        }
        (TangentDir::Leg(a), TangentDir::Leg(b)) => {
            if a == b {
                1.0
            } else {
                -1.0
            }
        }
        (TangentDir::Axis(a), TangentDir::Axis(b)) => {
            if a == b {
                1.0
            } else {
                -1.0
            }
        }
        (a, b) => panic!("incompatible direction data {a:?} / {b:?} at one base"),
    }
}

/// Cone metric `d_x(tγ, sη) = sqrt(t² + s² − 2ts·cos∠)`.
pub fn tangent_distance(u: &Tangent, v: &Tangent) -> f64 {
    assert!(
        u.base == v.base,
        "tangent_distance: tangents live at different base points"
    );
    let (t, s) = (u.magnitude, v.magnitude);
    if t == 0.0 || s == 0.0 {
        return t + s;
    }
    let c = cos_angle(u, v);
    // t² + s² − 2tsc = (t−s)² + 2ts(1−c), which cannot go negative.
    ((t - s) * (t - s) + 2.0 * t * s * (1.0 - c)).sqrt()
}

/// Cone inner product `g_x(tγ, sη) = ts·cos∠`.
pub fn g_inner(u: &Tangent, v: &Tangent) -> f64 {
    assert!(
        u.base == v.base,
        "g_inner: tangents live at different base points"
    );
    let (t, s) = (u.magnitude, v.magnitude);
    if t == 0.0 || s == 0.0 {
        return 0.0;
    }
    t * s * cos_angle(u, v)
}

/// Quasi-inner product on the base space:
/// `⟨xy,uv⟩ = ½(d²(x,v) + d²(y,u) − d²(x,u) − d²(y,v))`.
pub fn quasi_inner(x: &Point, y: &Point, u: &Point, v: &Point) -> f64 {
    assert_same_space(x, y, "quasi_inner");
    assert_same_space(x, u, "quasi_inner");
    assert_same_space(x, v, "quasi_inner");
    let d2 = |a: &Point, b: &Point| {
        let d = distance(a, b);
        d * d
    };
    0.5 * (d2(x, v) + d2(y, u) - d2(x, u) - d2(y, v))
}

// ---------------------------------------------------------------------------
// Serialization: {"space": ..., "coords": [...]} / {"space": ..., "leg", "r"}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct PointRepr {
    space: Space,
    #[serde(skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    leg: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<f64>,
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match &self.data {
            PointData::Vector(v) => PointRepr {
                space: self.space,
                coords: Some(v.clone()),
                leg: None,
                r: None,
            },
            PointData::Ray { leg, r } => PointRepr {
                space: self.space,
                coords: None,
                leg: Some(*leg),
                r: Some(*r),
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Point, D::Error> {
        let repr = PointRepr::deserialize(deserializer)?;
        point_from_repr(repr).map_err(|e| D::Error::custom(e.to_string()))
    }
}

fn point_from_repr(repr: PointRepr) -> Result<Point> {
    repr.space.validate()?;
    match repr.space {
        Space::Euclidean { dim } => {
            let coords = repr
                .coords
                .ok_or_else(|| Error::Config("euclidean point needs \"coords\"".into()))?;
            if coords.len() != dim {
                return Err(Error::Config(format!(
                    "expected {dim} coordinates, got {}",
                    coords.len()
                )));
            }
            Ok(Point::euclidean(coords))
        }
        Space::Hyperboloid { dim } => {
            let coords = repr
                .coords
                .ok_or_else(|| Error::Config("hyperboloid point needs \"coords\"".into()))?;
            if coords.len() != dim + 1 {
                return Err(Error::Config(format!(
                    "expected {} coordinates, got {}",
                    dim + 1,
                    coords.len()
                )));
            }
            Point::hyperboloid(coords)
        }
        Space::Spider { legs } => {
            let leg = repr
                .leg
                .ok_or_else(|| Error::Config("spider point needs \"leg\"".into()))?;
            let r = repr
                .r
                .ok_or_else(|| Error::Config("spider point needs \"r\"".into()))?;
            Point::spider(legs, leg, r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const E2: Space = Space::Euclidean { dim: 2 };

    fn e1(x: f64) -> Point {
        Point::euclidean(vec![x])
    }

    fn axis_point(t: f64) -> Point {
        // Point at arc-length parameter t along the hyperboloid axis geodesic.
        Point::hyperboloid(vec![t.cosh(), t.sinh(), 0.0]).unwrap()
    }

    #[test]
    fn euclidean_distance_is_l2() {
        let x = Point::euclidean(vec![0.0, 0.0]);
        let y = Point::euclidean(vec![3.0, 4.0]);
        assert_eq!(distance(&x, &y), 5.0);
    }

    #[test]
    fn spider_distance_through_origin() {
        let x = Point::spider(3, 0, 2.0).unwrap();
        let y = Point::spider(3, 1, 3.0).unwrap();
        assert_eq!(distance(&x, &y), 5.0);
        let same = Point::spider(3, 0, 3.5).unwrap();
        assert_eq!(distance(&x, &same), 1.5);
    }

    #[test]
    fn hyperboloid_distance_along_axis() {
        let x = axis_point(0.0);
        let y = axis_point(1.0);
        assert!((distance(&x, &y) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hyperboloid_distance_stable_for_close_points() {
        // The difference-based Minkowski form keeps near-coincident points
        // accurate; the naive arccosh(−⟨x,y⟩_L) route would be off by ~1e−8
        // here.
        let x = axis_point(1.0);
        let y = axis_point(1.0 + 1e-9);
        assert!((distance(&x, &y) - 1e-9).abs() < 1e-15);
    }

    #[test]
    #[should_panic(expected = "mixed spaces")]
    fn mixed_spaces_rejected() {
        let x = Point::euclidean(vec![0.0]);
        let y = Point::spider(3, 0, 1.0).unwrap();
        distance(&x, &y);
    }

    #[test]
    fn geodesic_midpoints() {
        let m = geodesic_point(&e1(0.0), &e1(4.0), 0.5);
        assert_eq!(m.coords()[0], 2.0);

        let x = Point::spider(3, 0, 2.0).unwrap();
        let y = Point::spider(3, 1, 2.0).unwrap();
        let m = geodesic_point(&x, &y, 0.5);
        assert!(m.is_spider_origin());

        // Midpoint of the axis geodesic; oracle is the two-distance
        // postcondition.
        let x = axis_point(0.0);
        let y = axis_point(2.0);
        let m = geodesic_point(&x, &y, 0.5);
        let d = distance(&x, &y);
        assert!((distance(&x, &m) - 0.5 * d).abs() < 1e-10);
        assert!((distance(&m, &y) - 0.5 * d).abs() < 1e-10);
        assert!((m.coords()[0] - 1.0f64.cosh()).abs() < 1e-12);
        assert!((m.coords()[1] - 1.0f64.sinh()).abs() < 1e-12);
    }

    #[test]
    fn geodesic_two_distance_postcondition_off_axis() {
        let x = Point::hyperboloid_from_spatial(&[0.3, -1.2]);
        let y = Point::hyperboloid_from_spatial(&[-2.0, 0.7]);
        let d = distance(&x, &y);
        for &t in &[0.1, 0.25, 0.5, 0.9] {
            let p = geodesic_point(&x, &y, t);
            assert!((distance(&x, &p) - t * d).abs() < 1e-10);
            assert!((distance(&p, &y) - (1.0 - t) * d).abs() < 1e-10);
        }
    }

    #[test]
    #[should_panic(expected = "not in [0,1]")]
    fn geodesic_rejects_out_of_range_t() {
        geodesic_point(&e1(0.0), &e1(1.0), 1.5);
    }

    #[test]
    fn log_map_euclidean() {
        let x = Point::euclidean(vec![0.0, 0.0]);
        let a = Point::euclidean(vec![3.0, 4.0]);
        let u = log_map(&x, &a);
        assert_eq!(u.magnitude(), 5.0);
        match u.dir() {
            TangentDir::Vector(v) => {
                assert!((v[0] - 0.6).abs() < 1e-15);
                assert!((v[1] - 0.8).abs() < 1e-15);
            }
            d => panic!("unexpected direction {d:?}"),
        }
    }

    #[test]
    fn log_map_of_self_is_apex() {
        for x in [
            Point::euclidean(vec![1.0, 2.0]),
            axis_point(0.7),
            Point::spider(3, 2, 1.5).unwrap(),
        ] {
            let u = log_map(&x, &x);
            assert!(u.is_zero());
            assert_eq!(tangent_norm(&u), 0.0);
        }
    }

    #[test]
    fn log_map_spider_case_analysis() {
        // Interior point, target across the origin: toward-origin, tree metric
        // magnitude.
        let x = Point::spider(3, 0, 1.0).unwrap();
        let a = Point::spider(3, 1, 2.0).unwrap();
        let u = log_map(&x, &a);
        assert_eq!(u.magnitude(), 3.0);
        assert_eq!(*u.dir(), TangentDir::Axis(AxisDir::TowardOrigin));

        // Same leg, above: toward-leaf.
        let b = Point::spider(3, 0, 4.0).unwrap();
        let u = log_map(&x, &b);
        assert_eq!(u.magnitude(), 3.0);
        assert_eq!(*u.dir(), TangentDir::Axis(AxisDir::TowardLeaf));

        // From the origin: leg datum.
        let o = Point::spider_origin(3);
        let u = log_map(&o, &a);
        assert_eq!(u.magnitude(), 2.0);
        assert_eq!(*u.dir(), TangentDir::Leg(1));
    }

    #[test]
    fn tangent_distance_pythagoras_and_identity() {
        let base = Point::euclidean(vec![0.0, 0.0]);
        let u = Tangent::new(base.clone(), TangentDir::Vector(vec![1.0, 0.0]), 3.0);
        let v = Tangent::new(base.clone(), TangentDir::Vector(vec![0.0, 1.0]), 4.0);
        assert!((tangent_distance(&u, &v) - 5.0).abs() < 1e-15);
        assert_eq!(tangent_distance(&u, &u), 0.0);
    }

    #[test]
    fn spider_origin_tangents_subtend_pi() {
        let o = Point::spider_origin(3);
        let u = Tangent::new(o.clone(), TangentDir::Leg(0), 2.0);
        let v = Tangent::new(o.clone(), TangentDir::Leg(1), 3.0);
        // Comparison angle π: d = t + s, g = −ts.
        assert!((tangent_distance(&u, &v) - 5.0).abs() < 1e-15);
        assert!((g_inner(&u, &v) + 6.0).abs() < 1e-15);
    }

    #[test]
    fn g_inner_norm_identity_and_orthogonality() {
        let base = Point::euclidean(vec![5.0, -1.0]);
        let u = Tangent::new(base.clone(), TangentDir::Vector(vec![1.0, 0.0]), 1.0);
        let v = Tangent::new(base.clone(), TangentDir::Vector(vec![0.0, 1.0]), 1.0);
        assert_eq!(g_inner(&u, &v), 0.0);
        let w = u.with_magnitude(3.0);
        assert_eq!(g_inner(&w, &w), 9.0);
        // Homogeneity in magnitudes.
        assert_eq!(g_inner(&w.scaled(2.0), &v), 2.0 * g_inner(&w, &v));
    }

    #[test]
    #[should_panic(expected = "different base points")]
    fn tangent_ops_require_common_base() {
        let u = Tangent::zero(e1(0.0));
        let v = Tangent::zero(e1(1.0));
        tangent_distance(&u, &v);
    }

    #[test]
    fn quasi_inner_identities() {
        // ⟨xy,xy⟩ = d²(x,y).
        assert_eq!(quasi_inner(&e1(0.0), &e1(3.0), &e1(0.0), &e1(3.0)), 9.0);
        // y = x forces zero.
        let x = e1(2.0);
        assert_eq!(quasi_inner(&x, &x, &e1(-1.0), &e1(5.0)), 0.0);
        // Euclidean reduction to (y−x)·(v−u).
        let p = |a: f64, b: f64| Point::euclidean(vec![a, b]);
        let q = quasi_inner(&p(0.0, 0.0), &p(1.0, 0.0), &p(0.0, 0.0), &p(0.0, 1.0));
        assert!(q.abs() < 1e-15);
    }

    #[test]
    fn spider_origin_is_identified() {
        let a = Point::spider(3, 0, 0.0).unwrap();
        let b = Point::spider(3, 2, 0.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(distance(&a, &b), 0.0);
    }

    #[test]
    fn hyperboloid_membership_validated() {
        assert!(Point::hyperboloid(vec![1.0, 0.0, 0.0]).is_ok());
        assert!(Point::hyperboloid(vec![1.0, 0.5, 0.0]).is_err());
        assert!(Point::hyperboloid(vec![-1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn point_json_round_trip_and_shape() {
        let p = Point::euclidean(vec![0.5, -2.0]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"space":{"model":"euclidean","dim":2},"coords":[0.5,-2.0]}"#
        );
        let back: Point = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);

        let p = Point::spider(3, 1, 2.5).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"space":{"model":"spider","legs":3},"leg":1,"r":2.5}"#
        );
        let back: Point = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);

        // Off-sheet hyperboloid coordinates are rejected at parse time.
        let bad = r#"{"space":{"model":"hyperboloid","dim":1},"coords":[1.0,0.5]}"#;
        assert!(serde_json::from_str::<Point>(bad).is_err());
    }

    #[test]
    fn space_validation() {
        assert!(Space::Spider { legs: 2 }.validate().is_err());
        assert!(Space::Euclidean { dim: 0 }.validate().is_err());
        assert!(E2.validate().is_ok());
    }
}
