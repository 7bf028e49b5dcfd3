//! Bracketed scalar root finding.
//!
//! [`brent`] follows the classic Brent/Dekker scheme: inverse quadratic or
//! secant steps while they stay inside the bracket and shrink it fast enough,
//! bisection otherwise. [`bisect`] halves down to adjacent floats.

use crate::error::{Error, Result};

/// Absolute x-tolerance used by the crate's root searches.
pub const XTOL: f64 = 1e-15;
/// Relative x-tolerance used by the crate's root searches.
pub const RTOL: f64 = 4.0 * f64::EPSILON;
pub const MAX_ITER: usize = 200;

/// Finds a root of `f` inside `[lo, hi]`, which must bracket a sign change.
pub fn brent<F>(mut f: F, lo: f64, hi: f64, xtol: f64, rtol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut xpre = lo;
    let mut xcur = hi;
    let mut fpre = f(xpre)?;
    let mut fcur = f(xcur)?;

    if fpre == 0.0 {
        return Ok(xpre);
    }
    if fcur == 0.0 {
        return Ok(xcur);
    }
    if fpre.signum() == fcur.signum() {
        return Err(Error::NoBracket { lo, hi });
    }

    let (mut xblk, mut fblk) = (0.0, 0.0);
    let (mut spre, mut scur) = (0.0, 0.0);

    for _ in 0..max_iter {
        if fpre != 0.0 && fcur != 0.0 && fpre.signum() != fcur.signum() {
            xblk = xpre;
            fblk = fpre;
            spre = xcur - xpre;
            scur = spre;
        }
        if fblk.abs() < fcur.abs() {
            xpre = xcur;
            xcur = xblk;
            xblk = xpre;
            fpre = fcur;
            fcur = fblk;
            fblk = fpre;
        }

        let delta = (xtol + rtol * xcur.abs()) / 2.0;
        let sbis = (xblk - xcur) / 2.0;
        if fcur == 0.0 || sbis.abs() < delta {
            return Ok(xcur);
        }

        if spre.abs() > delta && fcur.abs() < fpre.abs() {
            let stry = if xpre == xblk {
                -fcur * (xcur - xpre) / (fcur - fpre)
            } else {
                let dpre = (fpre - fcur) / (xpre - xcur);
                let dblk = (fblk - fcur) / (xblk - xcur);
                -fcur * (fblk * dblk - fpre * dpre) / (dblk * dpre * (fblk - fpre))
            };
            if 2.0 * stry.abs() < spre.abs().min(3.0 * sbis.abs() - delta) {
                spre = scur;
                scur = stry;
            } else {
                spre = sbis;
                scur = sbis;
            }
        } else {
            spre = sbis;
            scur = sbis;
        }

        xpre = xcur;
        fpre = fcur;
        if scur.abs() > delta {
            xcur += scur;
        } else {
            xcur += if sbis > 0.0 { delta } else { -delta };
        }
        fcur = f(xcur)?;
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
    })
}

/// Brent with the crate-wide default tolerances.
pub fn brent_default<F>(f: F, lo: f64, hi: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    brent(f, lo, hi, XTOL, RTOL, MAX_ITER)
}

/// Plain bisection until the bracket collapses to adjacent floats.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoBracket { lo, hi });
    }
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fmid = f(mid)?;
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
