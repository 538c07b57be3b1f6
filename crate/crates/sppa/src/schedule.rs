//! Step-size schedules with quantitative moduli.
//!
//! Both shipped schedules are square-summable but not summable:
//!
//! - `Harmonic`: `λ_n = 1/(n+1)`, the canonical choice. Its moduli are
//!   `χ(ε) = ⌈1/ε⌉` (from the integral tail bound
//!   `Σ_{n≥N} 1/(n+1)² < 1/N`), `θ(k, b) = ⌈(k+1)·e^b⌉` (from
//!   `Σ_{n=k}^{m} 1/(n+1) ≥ ln((m+2)/(k+1))`), and the square-sum bound
//!   `Λ = π²/6 + 1e−9`.
//! - `FastHarmonic`: `λ_n = 1/(ᾱ(n+2))`, the schedule of the fast
//!   nonasymptotic guarantee; its rates come from that guarantee directly, so
//!   it carries no `χ`/`θ` moduli. Its square-sum bound is
//!   `(π²/6 − 1)/ᾱ² + 1e−9`.

use serde::{Deserialize, Serialize};

use crate::rates::LogNat;

const BASEL: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
/// Additive slack turning the exact square sums into the strict upper bounds
/// the certificates require.
const STRICT_SLACK: f64 = 1e-9;

/// A step-size sequence `(λ_n)` in `ℓ²₊ \ ℓ¹₊`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    Harmonic,
    FastHarmonic { alpha_bar: f64 },
}

impl Schedule {
    /// `λ_n`.
    pub fn lambda(&self, n: u64) -> f64 {
        match *self {
            Schedule::Harmonic => 1.0 / (n as f64 + 1.0),
            Schedule::FastHarmonic { alpha_bar } => 1.0 / (alpha_bar * (n as f64 + 2.0)),
        }
    }

    /// `χ(ε)`: an index with `Σ_{n≥χ(ε)} λ_n² < ε`. Harmonic only.
    pub fn chi(&self, eps: f64) -> u64 {
        assert!(eps > 0.0, "chi needs eps > 0");
        match self {
            Schedule::Harmonic => {
                let raw = (1.0 / eps).ceil();
                if raw >= u64::MAX as f64 {
                    u64::MAX
                } else {
                    (raw as u64).max(1)
                }
            }
            Schedule::FastHarmonic { .. } => {
                panic!("fast-harmonic rates come from the fast guarantee, not from chi/theta")
            }
        }
    }

    /// `θ(k, b)`: an index with `Σ_{n=k}^{θ(k,b)} λ_n ≥ b`. Harmonic only.
    /// Returned in log-space because `b` is typically of the order `D/ε`.
    pub fn theta(&self, k: u64, b: f64) -> LogNat {
        assert!(b > 0.0, "theta needs b > 0");
        match self {
            Schedule::Harmonic => LogNat::ceil_of_product(k as f64 + 1.0, b),
            Schedule::FastHarmonic { .. } => {
                panic!("fast-harmonic rates come from the fast guarantee, not from chi/theta")
            }
        }
    }

    /// A strict upper bound `Λ > Σ_n λ_n²`.
    pub fn lambda_sq_bound(&self) -> f64 {
        match *self {
            Schedule::Harmonic => BASEL + STRICT_SLACK,
            Schedule::FastHarmonic { alpha_bar } => {
                (BASEL - 1.0) / (alpha_bar * alpha_bar) + STRICT_SLACK
            }
        }
    }

    /// Exact tail `Σ_{m≥n0} λ_m²`.
    pub fn lambda_sq_tail(&self, n0: u64) -> f64 {
        match *self {
            Schedule::Harmonic => inv_sq_tail(n0 + 1),
            Schedule::FastHarmonic { alpha_bar } => inv_sq_tail(n0 + 2) / (alpha_bar * alpha_bar),
        }
    }
}

/// `Σ_{m≥n} 1/m²` (the trigamma function at integer argument), accurate to
/// machine precision: recurrence below 20, asymptotic series above.
pub fn inv_sq_tail(n: u64) -> f64 {
    assert!(n >= 1);
    let mut acc = 0.0;
    let mut m = n;
    while m < 20 {
        acc += 1.0 / (m as f64 * m as f64);
        m += 1;
    }
    let x = m as f64;
    // ψ₁(x) = 1/x + 1/(2x²) + 1/(6x³) − 1/(30x⁵) + 1/(42x⁷) − 1/(30x⁹) + …
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    acc + inv
        * (1.0
            + inv
                * (0.5
                    + inv * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 / 30.0)))))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Partial-sum oracle with an integral remainder bound:
    /// `Σ_{n=N}^{M} 1/(n+1)²  ≤  Σ_{n≥N} λ_n²  ≤  partial + 1/(M+1)`.
    fn harmonic_sq_tail_oracle(from: u64, terms: u64) -> (f64, f64) {
        let mut acc = 0.0;
        for n in (from..from + terms).rev() {
            let l = 1.0 / (n as f64 + 1.0);
            acc += l * l;
        }
        (acc, acc + 1.0 / (from + terms) as f64)
    }

    #[test]
    fn lambda_values() {
        assert_eq!(Schedule::Harmonic.lambda(0), 1.0);
        assert_eq!(Schedule::Harmonic.lambda(9), 0.1);
        let fast = Schedule::FastHarmonic { alpha_bar: 0.5 };
        assert_eq!(fast.lambda(0), 1.0);
    }

    #[test]
    fn chi_satisfies_tail_contract() {
        let s = Schedule::Harmonic;
        assert_eq!(s.chi(0.1), 10);
        // Bracket the exact tail at chi(0.1) by partial sum to 10^7 plus the
        // integral remainder; this both proves Σ_{n≥10} λ_n² < 0.1 and pins
        // the closed-form tail used below.
        let (lo, hi) = harmonic_sq_tail_oracle(10, 10_000_000);
        let tail = s.lambda_sq_tail(10);
        assert!(lo < tail && tail < hi, "{lo} < {tail} < {hi}");
        assert!(hi < 0.1);
        // Spot-check the defining inequality at 110 points.
        let mut eps = 1.7;
        for _ in 0..110 {
            assert!(s.lambda_sq_tail(s.chi(eps)) < eps);
            eps *= 0.9;
        }
    }

    #[test]
    fn theta_satisfies_partial_sum_contract() {
        let s = Schedule::Harmonic;
        let t = s.theta(0, 1.0);
        assert_eq!(t.exact, Some(3));
        let partial: f64 = (0..=3).map(|n| s.lambda(n)).sum();
        assert!((partial - 25.0 / 12.0).abs() < 1e-15);
        assert!(partial >= 1.0);
        // Randomized spot checks in the regime where theta is enumerable.
        let mut state = 88172645463325252u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..120 {
            let k = (next() * 50.0) as u64;
            let b = 0.1 + 3.0 * next();
            let m = s.theta(k, b).exact.expect("small theta is exact");
            let sum: f64 = (k..=m).map(|n| s.lambda(n)).sum();
            assert!(sum >= b, "sum {sum} < b {b} for k {k}");
        }
    }

    #[test]
    fn lambda_bound_dominates_partial_sums() {
        let s = Schedule::Harmonic;
        let (lo, hi) = harmonic_sq_tail_oracle(0, 10_000_000);
        assert!(lo < s.lambda_sq_bound());
        assert!(hi <= s.lambda_sq_bound() + 1e-7);
        assert!((s.lambda_sq_bound() - (1.6449340668482264 + 1e-9)).abs() < 1e-15);

        let fast = Schedule::FastHarmonic { alpha_bar: 0.5 };
        let exact: f64 = (0..10_000_000u64)
            .rev()
            .map(|n| {
                let l = fast.lambda(n);
                l * l
            })
            .sum();
        assert!(exact < fast.lambda_sq_bound());
    }

    #[test]
    fn sq_tail_matches_direct_sum() {
        for &n0 in &[0u64, 1, 5, 100, 1000] {
            let direct: f64 = (n0..n0 + 50_000_000)
                .rev()
                .map(|n| {
                    let l = Schedule::Harmonic.lambda(n);
                    l * l
                })
                .sum();
            let tail = Schedule::Harmonic.lambda_sq_tail(n0);
            assert!((tail - direct).abs() < 1e-7, "n0 {n0}: {tail} vs {direct}");
            assert!(tail > direct);
        }
        let fast = Schedule::FastHarmonic { alpha_bar: 2.0 };
        let direct: f64 = (0..50_000_000u64)
            .rev()
            .map(|n| {
                let l = fast.lambda(n);
                l * l
            })
            .sum();
        assert!((fast.lambda_sq_tail(0) - direct).abs() < 1e-8);
    }

    #[test]
    #[should_panic(expected = "fast-harmonic rates")]
    fn fast_harmonic_has_no_chi() {
        Schedule::FastHarmonic { alpha_bar: 1.0 }.chi(0.1);
    }
}
