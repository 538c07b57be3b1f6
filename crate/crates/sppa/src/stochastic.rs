//! Finite scenario spaces and the stochastic side of the iteration: exact
//! expectations by enumeration, Fréchet-mean barycenters, the zero `x*` of the
//! mean field, and the zero-mean selection `φ*` at `x*`.
//!
//! The scenario space is deliberately finite: every integral over it is an
//! exact finite sum, conditional expectations given the past reduce to that
//! same sum (the next scenario is independent of the filtration), and the
//! recurrence inequalities of the convergence proof become deterministic
//! per-step assertions.
//!
//! Barycenters of tangent values are computed as Fréchet means inside the
//! tangent cone with its cone metric: plain weighted vector means in the flat
//! cones (Euclidean, hyperboloid), the per-leg candidate method in the spider
//! cone at the origin, and a signed mean on the one-dimensional cone at spider
//! interior points.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fields::{QuadraticField, StronglyMonotoneField};
use crate::geometry::{distance, AxisDir, Point, Space, Tangent, TangentDir};
use crate::{Error, Result};

/// Tolerance for the zero-mean conditions at `x*` (first-order condition of
/// the Fréchet mean, barycenter of `φ*`).
pub const BARYCENTER_TOL: f64 = 1e-8;

// ---------------------------------------------------------------------------
// Rng stream
// ---------------------------------------------------------------------------

/// Deterministic, splittable random stream realizing the i.i.d. scenario
/// sequence. Identical seeds reproduce identical draws bit-exactly; parallel
/// replications own independent streams derived by XOR-ing the replication
/// index into the seed.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> RngStream {
        RngStream {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream for replication `rep` of a run with master seed `master`:
    /// XOR-splitting on a mixed master. Mixing first matters — XOR-ing the
    /// replication index into small raw seeds would map nearby runs onto
    /// permutations of one another's stream sets.
    pub fn for_replication(master: u64, rep: u64) -> RngStream {
        RngStream::new(splitmix64(master) ^ rep)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

// ---------------------------------------------------------------------------
// Scenario distributions
// ---------------------------------------------------------------------------

/// One scenario: probability mass and its strongly monotone field.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Scenario {
    pub p: f64,
    pub field: QuadraticField,
}

/// A finite scenario space: probabilities summing to one, one quadratic field
/// per scenario, all anchors in a single space.
#[derive(Clone, Debug)]
pub struct ScenarioDistribution {
    space: Space,
    scenarios: Vec<Scenario>,
    cum: Vec<f64>,
}

impl ScenarioDistribution {
    pub fn new(scenarios: Vec<Scenario>) -> Result<ScenarioDistribution> {
        if scenarios.is_empty() {
            return Err(Error::Config("scenario list is empty".into()));
        }
        let space = scenarios[0].field.space();
        space.validate()?;
        let mut total = 0.0;
        for (i, s) in scenarios.iter().enumerate() {
            if s.p.is_nan() || s.p <= 0.0 {
                return Err(Error::Config(format!(
                    "scenario {i}: probability must be > 0, got {}",
                    s.p
                )));
            }
            if s.field.space() != space {
                return Err(Error::Config(format!(
                    "scenario {i}: anchor lives in {}, expected {}",
                    s.field.space(),
                    space
                )));
            }
            total += s.p;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "scenario probabilities sum to {total}, expected 1"
            )));
        }
        let mut cum = Vec::with_capacity(scenarios.len());
        let mut acc = 0.0;
        for s in &scenarios {
            acc += s.p;
            cum.push(acc);
        }
        *cum.last_mut().unwrap() = 1.0;
        Ok(ScenarioDistribution {
            space,
            scenarios,
            cum,
        })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    pub fn scenarios(&self) -> &[Scenario] {
        &self.scenarios
    }

    pub fn field(&self, id: usize) -> &QuadraticField {
        &self.scenarios[id].field
    }

    /// Inverse-CDF draw of the next scenario id.
    pub fn sample_scenario(&self, rng: &mut RngStream) -> usize {
        let u = rng.uniform();
        self.cum.partition_point(|&c| c <= u).min(self.len() - 1)
    }

    /// Mean modulus `ᾱ = Σ p_s·α(s) > 0`.
    pub fn mean_modulus(&self) -> f64 {
        self.scenarios.iter().map(|s| s.p * s.field.alpha()).sum()
    }

    /// Exact conditional expectation of `h(ξ_{n+1})` given the past: the next
    /// scenario is independent of the filtration, so this is `Σ p_s·h(s)`.
    pub fn conditional_expectation_next(&self, h: impl Fn(usize) -> f64) -> f64 {
        self.scenarios
            .iter()
            .enumerate()
            .map(|(i, s)| s.p * h(i))
            .sum()
    }

    /// The unique zero `x*` of the mean field: the Fréchet mean of the anchors
    /// with weights `p_s·α(s)/ᾱ`. Verifies the first-order condition — the
    /// cone barycenter of `{α(s)·log_{x*} z(s)}` with weights `p_s` must be
    /// `0_{x*}` — and reports a model error if it fails.
    pub fn zero_of_mean(&self) -> Result<Point> {
        let mean_mod = self.mean_modulus();
        let points: Vec<Point> = self
            .scenarios
            .iter()
            .map(|s| s.field.anchor().clone())
            .collect();
        let weights: Vec<f64> = self
            .scenarios
            .iter()
            .map(|s| s.p * s.field.alpha() / mean_mod)
            .collect();
        let x_star = frechet_mean(&self.space, &points, &weights);
        let logs: Vec<Tangent> = self
            .scenarios
            .iter()
            .map(|s| crate::geometry::log_map(&x_star, s.field.anchor()).scaled(s.field.alpha()))
            .collect();
        let probs: Vec<f64> = self.scenarios.iter().map(|s| s.p).collect();
        let residual = tangent_barycenter(&x_star, &logs, &probs).magnitude();
        if residual > BARYCENTER_TOL {
            return Err(Error::Model(format!(
                "first-order condition fails at the candidate zero: residual {residual:e}"
            )));
        }
        Ok(x_star)
    }

    /// The zero-mean selection `φ*` at `x*`: the canonical subgradient of each
    /// scenario field, validated to have cone barycenter `0_{x*}`.
    pub fn phi_star(&self, x_star: &Point) -> Result<PhiStar> {
        let values: Vec<Tangent> = self
            .scenarios
            .iter()
            .map(|s| s.field.subgradient(x_star))
            .collect();
        let probs: Vec<f64> = self.scenarios.iter().map(|s| s.p).collect();
        let residual = tangent_barycenter(x_star, &values, &probs).magnitude();
        if residual > BARYCENTER_TOL {
            return Err(Error::Model(format!(
                "phi* barycenter is {residual:e} away from 0 at x*"
            )));
        }
        Ok(PhiStar {
            base: x_star.clone(),
            values,
        })
    }
}

/// A zero-mean square-integrable selection of the field at `x*`: one tangent
/// per scenario, cone barycenter `0_{x*}`.
#[derive(Clone, Debug)]
pub struct PhiStar {
    base: Point,
    values: Vec<Tangent>,
}

impl PhiStar {
    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn value(&self, id: usize) -> &Tangent {
        &self.values[id]
    }

    pub fn values(&self) -> &[Tangent] {
        &self.values
    }

    /// `∫‖φ*‖²_{x*} dμ = Σ p_s·‖φ*(s)‖²`.
    pub fn second_moment(&self, dist: &ScenarioDistribution) -> f64 {
        dist.conditional_expectation_next(|s| {
            let m = self.values[s].magnitude();
            m * m
        })
    }
}

// ---------------------------------------------------------------------------
// Fréchet means
// ---------------------------------------------------------------------------

/// Weighted Fréchet objective `Σ w_i·d²(y, p_i)`.
pub fn frechet_objective(y: &Point, points: &[Point], weights: &[f64]) -> f64 {
    points
        .iter()
        .zip(weights)
        .map(|(p, w)| {
            let d = distance(y, p);
            w * d * d
        })
        .sum()
}

/// The barycenter `argmin_y Σ w_i·d²(y, p_i)` (weights nonnegative with
/// positive total; normalization is irrelevant to the argmin). Euclidean: the
/// weighted arithmetic mean. Hyperboloid: fixed-point iteration on the
/// weighted-mean map with Minkowski weights `d/sinh(d)`, renormalized onto the
/// sheet, stopping when successive iterates are within 1e−10. Spider: per-leg
/// one-dimensional minimization plus the origin.
pub fn frechet_mean(space: &Space, points: &[Point], weights: &[f64]) -> Point {
    assert!(!points.is_empty(), "frechet_mean of an empty point list");
    assert_eq!(points.len(), weights.len(), "one weight per point");
    for p in points {
        assert!(p.space() == *space, "frechet_mean: point outside {space}");
    }
    let total: f64 = weights.iter().sum();
    assert!(
        weights.iter().all(|w| *w >= 0.0) && total > 0.0,
        "weights must be nonnegative with positive total"
    );
    match *space {
        Space::Euclidean { dim } => {
            let mut acc = vec![0.0; dim];
            for (p, w) in points.iter().zip(weights) {
                for (a, c) in acc.iter_mut().zip(p.coords()) {
                    *a += w * c / total;
                }
            }
            Point::euclidean(acc)
        }
        Space::Hyperboloid { dim } => hyperboloid_mean(dim, points, weights),
        Space::Spider { legs } => spider_mean(legs, points, weights),
    }
}

fn hyperboloid_mean(dim: usize, points: &[Point], weights: &[f64]) -> Point {
    // sinc-style coefficient d/sinh(d); 1 at d = 0.
    fn coeff(d: f64) -> f64 {
        if d < 1e-8 {
            1.0 - d * d / 6.0
        } else {
            d / d.sinh()
        }
    }
    let ambient_average = |coeffs: &dyn Fn(&Point) -> f64| -> Point {
        let mut acc = vec![0.0; dim + 1];
        for (p, w) in points.iter().zip(weights) {
            let c = w * coeffs(p);
            for (a, x) in acc.iter_mut().zip(p.coords()) {
                *a += c * x;
            }
        }
        // The accumulator is a convex-ish combination of sheet points, hence
        // timelike; rescaling lands it back on the sheet.
        let q = -{
            let mut s = -acc[0] * acc[0];
            for c in &acc[1..] {
                s += c * c;
            }
            s
        };
        let scale = 1.0 / q.sqrt();
        Point::hyperboloid(acc.iter().map(|c| c * scale).collect())
            .expect("renormalized average is on the sheet")
    };
    let mut y = ambient_average(&|_| 1.0);
    for _ in 0..10_000 {
        let prev = y.clone();
        y = ambient_average(&|p| coeff(distance(&prev, p)));
        if distance(&prev, &y) < 1e-10 {
            return y;
        }
    }
    panic!("hyperboloid Fréchet mean did not converge in 10000 iterations");
}

fn spider_mean(legs: usize, points: &[Point], weights: &[f64]) -> Point {
    // Candidate on leg l at radius r: signed coordinate is +r_i on leg l and
    // −r_i elsewhere; the unconstrained 1-D minimizer is the signed weighted
    // mean, clamped to the leg.
    let total: f64 = weights.iter().sum();
    let mut best: Option<(f64, Point)> = None;
    for leg in 0..legs {
        let signed: f64 = points
            .iter()
            .zip(weights)
            .map(|(p, w)| {
                let (l, r) = p.ray();
                if l == leg && r > 0.0 {
                    w * r
                } else {
                    -w * r
                }
            })
            .sum();
        let r = if total > 0.0 {
            (signed / total).max(0.0)
        } else {
            0.0
        };
        let candidate = Point::spider(legs, leg, r).expect("candidate radius is valid");
        let obj = frechet_objective(&candidate, points, weights);
        if best.as_ref().is_none_or(|(b, _)| obj < *b) {
            best = Some((obj, candidate));
        }
    }
    best.expect("at least one leg").1
}

// ---------------------------------------------------------------------------
// Barycenters of tangent values
// ---------------------------------------------------------------------------

/// Fréchet mean of tangents inside the tangent cone at `base`, under the cone
/// metric `d_x`. All tangents must be based at `base`.
pub fn tangent_barycenter(base: &Point, tangents: &[Tangent], weights: &[f64]) -> Tangent {
    assert!(!tangents.is_empty(), "barycenter of an empty tangent list");
    assert_eq!(tangents.len(), weights.len());
    for t in tangents {
        assert!(t.base() == base, "tangent based at a different point");
    }
    match base.space() {
        Space::Euclidean { dim } | Space::Hyperboloid { dim } => {
            // Flat cone: a plain weighted vector mean of m·v in ambient
            // coordinates of the tangent (hyper)plane.
            let len = match base.space() {
                Space::Euclidean { .. } => dim,
                _ => dim + 1,
            };
            let mut acc = vec![0.0; len];
            for (t, w) in tangents.iter().zip(weights) {
                if let TangentDir::Vector(v) = t.dir() {
                    for (a, c) in acc.iter_mut().zip(v) {
                        *a += w * t.magnitude() * c;
                    }
                }
            }
            let norm = match base.space() {
                Space::Euclidean { .. } => acc.iter().map(|c| c * c).sum::<f64>().sqrt(),
                _ => {
                    let mut s = -acc[0] * acc[0];
                    for c in &acc[1..] {
                        s += c * c;
                    }
                    // Tangent vectors are spacelike; rounding can push the
                    // form of a near-zero sum slightly negative.
                    s.max(0.0).sqrt()
                }
            };
            if norm == 0.0 {
                Tangent::zero(base.clone())
            } else {
                Tangent::new(base.clone(), TangentDir::Vector(acc), norm)
            }
        }
        Space::Spider { legs } => {
            if base.is_spider_origin() {
                // The cone at the origin is itself a K-spider with the
                // tangent magnitudes as radii.
                let total: f64 = weights.iter().sum();
                let mut best: Option<(f64, Tangent)> = None;
                for leg in 0..legs {
                    let signed: f64 = tangents
                        .iter()
                        .zip(weights)
                        .map(|(t, w)| match t.dir() {
                            TangentDir::Leg(l) if *l == leg => w * t.magnitude(),
                            _ => -w * t.magnitude(),
                        })
                        .sum();
                    let r = if total > 0.0 {
                        (signed / total).max(0.0)
                    } else {
                        0.0
                    };
                    let candidate = if r == 0.0 {
                        Tangent::zero(base.clone())
                    } else {
                        Tangent::new(base.clone(), TangentDir::Leg(leg), r)
                    };
                    let obj: f64 = tangents
                        .iter()
                        .zip(weights)
                        .map(|(t, w)| {
                            let d = crate::geometry::tangent_distance(&candidate, t);
                            w * d * d
                        })
                        .sum();
                    if best.as_ref().is_none_or(|(b, _)| obj < *b) {
                        best = Some((obj, candidate));
                    }
                }
                best.expect("at least one leg").1
            } else {
                // One-dimensional cone: signed mean along the leg axis.
                let mean: f64 = tangents
                    .iter()
                    .zip(weights)
                    .map(|(t, w)| match t.dir() {
                        TangentDir::Axis(AxisDir::TowardLeaf) => w * t.magnitude(),
                        TangentDir::Axis(AxisDir::TowardOrigin) => -w * t.magnitude(),
                        TangentDir::Zero => 0.0,
                        d => panic!("unexpected dir {d:?} at interior point"),
                    })
                    .sum();
                if mean == 0.0 {
                    Tangent::zero(base.clone())
                } else if mean > 0.0 {
                    Tangent::new(base.clone(), TangentDir::Axis(AxisDir::TowardLeaf), mean)
                } else {
                    Tangent::new(base.clone(), TangentDir::Axis(AxisDir::TowardOrigin), -mean)
                }
            }
        }
    }
}
