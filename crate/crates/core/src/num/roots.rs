//! Bracketed scalar root finding.
//!
//! Bisection only: every caller in this crate has a guaranteed sign-change
//! bracket, and none of the target functions is assumed monotone globally,
//! so exhaustive bracketing plus bisection is the safe combination.

use crate::error::{Error, Result};

/// Bisection on `[lo, hi]`; requires a sign change (or an exact zero at an
/// endpoint). Converges to absolute tolerance `tol` in the argument.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Domain(format!(
            "no sign change on [{lo}, {hi}]: f(lo)={flo:e}, f(hi)={fhi:e}"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval at floating-point resolution
        }
        let fmid = f(mid);
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

/// Scans `f` on a uniform grid over `[lo, hi]` and returns every sub-interval
/// with a sign change, in ascending order.
pub fn scan_brackets<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, steps: usize) -> Vec<(f64, f64)> {
    let mut brackets = Vec::new();
    let h = (hi - lo) / steps as f64;
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    for i in 1..=steps {
        let x = if i == steps { hi } else { lo + i as f64 * h };
        let fx = f(x);
        if f_prev == 0.0 {
            brackets.push((x_prev, x_prev));
        } else if fx.is_finite() && f_prev.is_finite() && f_prev.signum() != fx.signum() {
            brackets.push((x_prev, x));
        }
        x_prev = x;
        f_prev = fx;
    }
    brackets
}
