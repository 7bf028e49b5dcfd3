//! Equal opposite masses (`μ1 = μ3`): square versus kite.
//!
//! With `a = μ2/μ1` the square is always central, and the kite
//! `(θ1, π-θ1, π-θ1, θ1)` with `θ1 in (π/6, π/2)` is central exactly when
//! `a = h(θ1)`, where
//!
//! ```text
//! h(x) = (-f(π + x) - f(x)) / f(2x).
//! ```
//!
//! `h` decreases from `+∞` at `π/6` to `3√2/7` at `π/2`, so a kite exists iff
//! `a > 3√2/7` and its angle is unique.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_6, SQRT_2};

use crate::error::{Error, Result};
use crate::roots::bisect;

/// Distance kept from the poles of `h` at π/6 and π/2.
pub const H_GUARD: f64 = 1e-9;
/// Ratios within this distance of the critical ratio are reported as critical.
pub const CRITICAL_TOL: f64 = 1e-12;

/// `3√2/7 ≈ 0.6060915`, where the kite branch is born from the square.
pub fn critical_ratio() -> f64 {
    3.0 * SQRT_2 / 7.0
}

/// `h(x)` on `(π/6, π/2)`.
///
/// Uses `f(π - x) - f(x) = √2 sin(u/2) (1 + sin(x)/2) / sin²x` and
/// `f(2x) = sin(2u) (1 - 1/(8 sin³x))` with `u = π/2 - x`, which is the same
/// quotient without the cancellation of the printed form near π/2.
pub fn eval_h(x: f64) -> Result<f64> {
    let (lo, hi) = (FRAC_PI_6 + H_GUARD, FRAC_PI_2 - H_GUARD);
    if !(lo..=hi).contains(&x) {
        return Err(Error::Domain { value: x, lo, hi });
    }
    let u = FRAC_PI_2 - x;
    let s = libm::sin(x);
    let numerator = SQRT_2 * libm::sin(0.5 * u) * (1.0 + 0.5 * s) / (s * s);
    let denominator = libm::sin(2.0 * u) * (1.0 - 1.0 / (8.0 * s * s * s));
    Ok(numerator / denominator)
}

/// The kite angle `θ1 in (π/6, π/2)` with `h(θ1) = a`.
pub fn kite_angle_for_ratio(a: f64) -> Result<f64> {
    let critical = critical_ratio();
    if !(a.is_finite() && a > critical + CRITICAL_TOL) {
        return Err(Error::NoKite { ratio: a, critical });
    }
    let (lo, hi) = (FRAC_PI_6 + H_GUARD, FRAC_PI_2 - H_GUARD);
    if a >= eval_h(lo)? {
        return Err(Error::InvalidParameter(format!(
            "ratio {a} beyond the resolvable range"
        )));
    }
    bisect(|x| eval_h(x).map(|v| v - a), lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    SquareOnly,
    Critical,
    SquareAndKite,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::SquareOnly => "square_only",
            Regime::Critical => "critical",
            Regime::SquareAndKite => "square_and_kite",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationResult {
    pub a: f64,
    pub regime: Regime,
    pub kite_theta1: Option<f64>,
}

pub fn classify(a: f64) -> Result<BifurcationResult> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "ratio a = {a} must be positive"
        )));
    }
    let critical = critical_ratio();
    let (regime, kite_theta1) = if (a - critical).abs() <= CRITICAL_TOL {
        (Regime::Critical, None)
    } else if a < critical {
        (Regime::SquareOnly, None)
    } else {
        (Regime::SquareAndKite, Some(kite_angle_for_ratio(a)?))
    };
    Ok(BifurcationResult {
        a,
        regime,
        kite_theta1,
    })
}

/// `steps` uniformly spaced ratios from `a_min` to `a_max`, classified.
pub fn sweep(a_min: f64, a_max: f64, steps: usize) -> Result<Vec<BifurcationResult>> {
    if !(a_min.is_finite() && a_max.is_finite() && 0.0 < a_min && a_min < a_max) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < a_min < a_max, got [{a_min}, {a_max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidParameter(format!(
            "steps must be >= 2, got {steps}"
        )));
    }
    let da = (a_max - a_min) / (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            classify(if i + 1 == steps {
                a_max
            } else {
                a_min + da * i as f64
            })
        })
        .collect()
}
