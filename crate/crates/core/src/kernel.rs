//! The coorbital kernel
//!
//! ```text
//! f(x) = sin(x) * (1 - 1 / (8 |sin(x/2)|^3)),    x in (0, 2π)
//! ```
//!
//! `f` measures the tangential pull that one satellite exerts on another at
//! angular separation `x`, net of the shift of the central body. Its roots in
//! `(0, 2π)` are π/3, π and 5π/3. It is odd about π, increasing on `(0, θc)`,
//! and decreasing on `(θc, π)`, with `θc ≈ 1.891082290` rad (about 0.601950π or 108.351°,
//! computed by [`critical_point`]). Its third derivative is positive everywhere.
//!
//! Writing `s = sin(x/2)`, `c = cos(x/2)` the derivatives are
//!
//! ```text
//! f'   =  cos x + (3 + cos x) / (16 s^3)
//! f''  = -sin x - 3c / (8 s^4) + c / (16 s^2)
//! f''' = -cos x + 3 / (4 s^5) - 5 / (8 s^3) + 1 / (32 s)
//! ```

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::roots::{bisect, brent_default};

pub const TWO_PI: f64 = 2.0 * PI;

/// Distance kept from the singular endpoints 0 and 2π.
pub const DOMAIN_GUARD: f64 = 1e-9;

/// `f` and its first three derivatives at `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEval {
    pub x: f64,
    pub f: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
}

fn check_domain(x: f64) -> Result<()> {
    if (DOMAIN_GUARD..=TWO_PI - DOMAIN_GUARD).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain {
            value: x,
            lo: DOMAIN_GUARD,
            hi: TWO_PI - DOMAIN_GUARD,
        })
    }
}

#[inline]
fn half_sin(x: f64) -> f64 {
    let s = libm::fabs(libm::sin(0.5 * x));
    debug_assert!(s > 0.0, "sin(x/2) vanishes at x = {x}");
    s
}

pub fn eval_f(x: f64) -> Result<f64> {
    check_domain(x)?;
    let s = half_sin(x);
    Ok(libm::sin(x) * (1.0 - 1.0 / (8.0 * s * s * s)))
}

pub fn eval_f1(x: f64) -> Result<f64> {
    check_domain(x)?;
    let s = half_sin(x);
    let cos_x = libm::cos(x);
    Ok(cos_x + (3.0 + cos_x) / (16.0 * s * s * s))
}

pub fn eval_f2(x: f64) -> Result<f64> {
    check_domain(x)?;
    let s = half_sin(x);
    let c = libm::cos(0.5 * x);
    let s2 = s * s;
    Ok(-libm::sin(x) - 3.0 * c / (8.0 * s2 * s2) + c / (16.0 * s2))
}

pub fn eval_f3(x: f64) -> Result<f64> {
    check_domain(x)?;
    let s = half_sin(x);
    let s2 = s * s;
    let s3 = s2 * s;
    Ok(-libm::cos(x) + 3.0 / (4.0 * s3 * s2) - 5.0 / (8.0 * s3) + 1.0 / (32.0 * s))
}

/// Analytic `f, f', f'', f'''` at `x`.
pub fn eval_f_derivatives(x: f64) -> Result<KernelEval> {
    Ok(KernelEval {
        x,
        f: eval_f(x)?,
        f1: eval_f1(x)?,
        f2: eval_f2(x)?,
        f3: eval_f3(x)?,
    })
}

/// The unique critical point θc of `f` in `(0, π)`; a maximum.
pub fn critical_point() -> f64 {
    // f'(π/3) = 9/4 > 0 and f'(π) = -7/8 < 0.
    brent_default(eval_f1, PI / 3.0, PI).expect("f' changes sign on [π/3, π]")
}

/// The three roots of `f` in `(0, 2π)`, ascending: π/3, π, 5π/3.
pub fn roots_of_f() -> [f64; 3] {
    // f < 0 on (0, π/3), > 0 on (π/3, π), < 0 on (π, 5π/3), > 0 on (5π/3, 2π).
    let brackets = [(0.5, 1.5), (2.5, 3.7), (4.5, 5.8)];
    brackets.map(|(lo, hi)| brent_default(eval_f, lo, hi).expect("f changes sign on bracket"))
}

/// The maximum value `f(θc)`; `-f(θc)` is the minimum, attained at `2π - θc`.
pub fn max_value() -> f64 {
    eval_f(critical_point()).expect("θc is inside the domain")
}

/// For a level `v` in `(-f(θc), f(θc))`, the preimages `(tL, tR)` with
/// `0 < tL < θc < tR < 2π - θc` and `f(tL) = f(tR) = v`.
pub fn level_preimages(level: f64) -> Result<(f64, f64)> {
    let tc = critical_point();
    let fmax = eval_f(tc)?;
    if !(level > -fmax && level < fmax) {
        return Err(Error::InvalidParameter(alloc::format!(
            "level {level} outside (-{fmax}, {fmax})"
        )));
    }
    let shifted = |x: f64| eval_f(x).map(|v| v - level);
    let left = bisect(shifted, DOMAIN_GUARD, tc)?;
    let right = bisect(shifted, tc, TWO_PI - tc)?;
    Ok((left, right))
}

/// Checks the pairing inequality for two levels: if `f1 < f2`, the preimage
/// pair of the higher level sits strictly inside the lower level's pair and
/// has the smaller sum, `t2L + t2R < t1L + t1R`.
///
/// Returns the two sums `(t1L + t1R, t2L + t2R)`.
pub fn level_pair_sums(f1: f64, f2: f64) -> Result<(f64, f64)> {
    if f1 >= f2 {
        return Err(Error::InvalidParameter(alloc::format!(
            "need f1 < f2, got {f1} >= {f2}"
        )));
    }
    let (t1l, t1r) = level_preimages(f1)?;
    let (t2l, t2r) = level_preimages(f2)?;
    Ok((t1l + t1r, t2l + t2r))
}

/// For `0 < t1 < θc < t2 < 2π` with `f(t1) >= f(t2)`, returns `Some(t1 + t2)`
/// (which must exceed `2θc`); `None` when the hypotheses do not hold.
pub fn corollary_sum(t1: f64, t2: f64) -> Result<Option<f64>> {
    let tc = critical_point();
    if !(t1 < tc && tc < t2) {
        return Ok(None);
    }
    if eval_f(t1)? >= eval_f(t2)? {
        Ok(Some(t1 + t2))
    } else {
        Ok(None)
    }
}
