//! Adaptive Simpson quadrature.
//!
//! All singular integrands in this crate are regularized by an explicit
//! change of variables before they reach the quadrature (square-root
//! endpoint singularities via `t = a + u^2`, infinite tails via `t = 1/v`),
//! so a smooth-integrand rule with Richardson error control is enough.

use crate::error::{Error, Result};

/// Result of an adaptive quadrature run.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    /// Accumulated Richardson error estimate.
    pub error: f64,
}

const MAX_DEPTH: u32 = 60;

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// `f` must be finite on the closed interval, endpoints included.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    adaptive_simpson_with_floor(f, a, b, tol, 3e-13)
}

/// [`adaptive_simpson`] with an explicit round-off floor: a panel is accepted
/// once its Richardson increment falls below `noise_rel` times the panel mass,
/// even if the subdivided tolerance has not been met. Without this, an
/// integrand whose values carry relative noise above `noise_rel` (e.g. from
/// cancellation in its own evaluation) makes the subdivision race the noise
/// forever: both the tolerance and the noise-induced increment halve per
/// level, so the recursion degenerates into an exhaustive tree walk.
pub fn adaptive_simpson_with_floor<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    noise_rel: f64,
) -> Result<Quadrature> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("quadrature tolerance must be positive, got {tol}")));
    }
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0 });
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    for (x, v) in [(a, fa), (m, fm), (b, fb)] {
        if !v.is_finite() {
            return Err(Error::Numerics(format!("integrand non-finite at {x}: {v}")));
        }
    }
    let whole = simpson(a, b, fa, fm, fb);
    let mut acc = Quadrature { value: 0.0, error: 0.0 };
    simpson_recurse(f, a, b, fa, fm, fb, whole, tol, noise_rel, MAX_DEPTH, &mut acc)?;
    Ok(acc)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    noise_rel: f64,
    depth: u32,
    acc: &mut Quadrature,
) -> Result<()> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    if !flm.is_finite() || !frm.is_finite() {
        return Err(Error::Numerics(format!(
            "integrand non-finite inside [{a}, {b}]"
        )));
    }
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || delta.abs() <= noise_rel * (left.abs() + right.abs()) {
        acc.value += left + right + delta / 15.0;
        acc.error += delta.abs() / 15.0;
        return Ok(());
    }
    if depth == 0 {
        return Err(Error::Numerics(format!(
            "adaptive quadrature did not converge on [{a}, {b}] (residual {delta:e})"
        )));
    }
    simpson_recurse(f, a, m, fa, flm, fm, left, tol / 2.0, noise_rel, depth - 1, acc)?;
    simpson_recurse(f, m, b, fm, frm, fb, right, tol / 2.0, noise_rel, depth - 1, acc)
}

/// Composite Simpson rule with `panels` uniform panels (for convergence-order
/// studies; `panels` must be >= 1).
pub fn composite_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for i in 0..panels {
        let x0 = a + i as f64 * h;
        let x1 = x0 + h;
        sum += simpson(x0, x1, f(x0), f(0.5 * (x0 + x1)), f(x1));
    }
    sum
}
