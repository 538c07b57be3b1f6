//! Stochastic proximal point iteration on metric spaces of nonpositive
//! curvature, with explicit convergence-rate certificates and a pathwise
//! verification harness.
//!
//! The iteration approximates the zero `x*` of the mean of a family of
//! strongly monotone vector fields `A(s, ·)` indexed by scenarios `s` drawn
//! i.i.d. from a finite distribution:
//!
//! ```text
//! x_{n+1} = J_{λ_n}(ξ_{n+1}, x_n)
//! ```
//!
//! where `J_λ(s, ·)` is the resolvent of `A(s, ·)` and `(λ_n)` is
//! square-summable but not summable. Everything runs over three concrete
//! Hadamard-space models:
//!
//! - [`Space::Euclidean`] — flat; tangent spaces are ordinary vector spaces;
//! - [`Space::Hyperboloid`] — the Lorentz model of hyperbolic space, a
//!   genuinely nonlinear Hadamard manifold with flat tangent spaces;
//! - [`Space::Spider`] — K half-lines glued at an origin, the simplest
//!   non-manifold tree; its tangent cone at the origin is *not* flat, which
//!   exercises the independence assumption the convergence proof needs.
//!
//! Scenario fields are quadratic (`f = (α/2)·d²(·, z)`), so resolvents have a
//! closed form that an independent brute-force oracle cross-checks, and all
//! scenario expectations are exact finite sums. That is the point of the
//! crate: the recurrence inequalities behind the convergence theorem become
//! deterministic per-step assertions that [`verify`] checks pathwise.
//!
//! Module map:
//!
//! - [`geometry`] — points, geodesics, log maps, tangent cones, the
//!   quasi-inner product;
//! - [`fields`] — quadratic strongly monotone fields, subgradients,
//!   resolvents (closed form + oracle), Yosida approximates;
//! - [`stochastic`] — finite scenario distributions, Fréchet means, the mean
//!   field's zero `x*`, the zero-mean selection `φ*`, exact conditional
//!   expectations;
//! - [`schedule`] — step-size schedules with quantitative moduli `χ`, `θ`, `Λ`;
//! - [`rates`] — rate certificates (`C`, `D`, `u`, `ρ`, `ρ'`) in exact
//!   log-space arithmetic;
//! - [`sim`] — trajectories and the seeded, reproducible Monte Carlo engine;
//! - [`verify`] — pathwise and statistical checkers for every inequality the
//!   convergence proof rests on;
//! - [`benchmarks`] — the shipped scenario sets used throughout the test
//!   suite and the CLI;
//! - [`config`] / [`cli`] — JSON experiment configs and the `sppa` binary.
//!
//! Runnable walkthroughs for each capability live in `examples/`.

pub mod benchmarks;
pub mod cli;
pub mod config;
pub mod fields;
pub mod geometry;
pub mod rates;
pub mod schedule;
pub mod sim;
pub mod stochastic;
pub mod verify;

pub use fields::QuadraticField;
pub use geometry::{
    distance, g_inner, geodesic_point, log_map, quasi_inner, tangent_distance, Point, Space,
    Tangent,
};
pub use rates::{LogNat, RateCertificate};
pub use schedule::Schedule;
pub use sim::{monte_carlo, run_trajectory, McConfig, RunStats, Trajectory};
pub use stochastic::{frechet_mean, PhiStar, RngStream, Scenario, ScenarioDistribution};

/// Errors surfaced through `Result`s: configuration/validation problems and
/// model-assumption violations. Contract violations in hot-path geometry
/// operations (mixed spaces, out-of-range parameters) panic instead; they are
/// programming errors, not inputs.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid user input: malformed config, bad scenario file, parameter out
    /// of range. CLI exit code 2.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// A scenario set violates a standing model assumption (the zero-mean
    /// selection at `x*` does not exist within tolerance). CLI exit code 3.
    #[error("model assumption violated: {0}")]
    Model(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
