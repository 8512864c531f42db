//! Generating curves of catenoids: the axial-displacement quadrature for
//! c <= 0 and the arclength profile ODE for all curvatures.
//!
//! The quadrature integrand has an inverse-square-root singularity at the
//! neck `t = a`; the substitution `t = a + u^2` makes it analytic in `u`.
//! Infinite upper limits are split at a finite cutoff and the tail is mapped
//! by `t = 1/v`. Near the neck the ratio deviations `f(t)/f(a) - 1` and
//! `f'(t)/f'(a) - 1` are computed from product formulas so no cancellation
//! occurs; away from it everything runs in log space so large hyperbolic
//! arguments cannot overflow.

use crate::error::{Error, Result};
use crate::num::ode::Dopri5;
use crate::num::quad::adaptive_simpson;
use crate::num::roots::bisect;
use crate::spaceform::SpaceForm;

/// Neck parameter of a catenoid: the minimum radial value of the generating
/// curve for c <= 0, and the constant of the profile first integral
/// `dx1^2 = 1 - c x1^2 - a^2 x1^{2-2n}` in general.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeckParam(f64);

impl NeckParam {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Domain(format!("neck parameter must be positive, got {a}")));
        }
        Ok(NeckParam(a))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Point of the generating curve in (radial, axial) geodesic coordinates.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    /// Distance to the rotation axis.
    pub y: f64,
    /// Axial coordinate along the rotation axis.
    pub x: f64,
}

/// Arclength state of a catenoid profile.
#[derive(Debug, Clone, Copy)]
pub struct ProfilePoint {
    pub s: f64,
    pub x1: f64,
    pub dx1: f64,
    /// Evaluated from the closed form, not integrated.
    pub ddx1: f64,
}

/// Sine of the angle between the generating curve and the radial direction:
/// `f^{n-1}(a) f'(a) / (f^{n-1}(y) f'(y))`. The numerator is the conserved
/// constant of the first-order curve equation.
pub fn sin_alpha(sf: &SpaceForm, a: &NeckParam, y: f64) -> Result<f64> {
    if sf.c() > 0.0 {
        return Err(Error::UnsupportedCurvature(
            "sin_alpha is defined for c <= 0; use the support-function module for c > 0".into(),
        ));
    }
    let av = a.value();
    if y < av {
        return Err(Error::Domain(format!("y = {y} is below the neck value a = {av}")));
    }
    let nm1 = (sf.n() - 1) as f64;
    Ok((nm1 * (sf.ln_f(av) - sf.ln_f(y)) + sf.ln_fp(av) - sf.ln_fp(y)).exp())
}

/// Axial displacement `x(y)` of the generating curve for c <= 0, by
/// quadrature with endpoint-singularity substitution. `y` may be infinite
/// (the total half-extent), which requires n >= 3 when c = 0.
pub fn generating_curve_x(sf: &SpaceForm, a: &NeckParam, y: f64, tol: f64) -> Result<f64> {
    if sf.c() > 0.0 {
        return Err(Error::UnsupportedCurvature(
            "generating_curve_x requires c <= 0; use the support-function module for c > 0".into(),
        ));
    }
    let av = a.value();
    if !(y >= av) {
        return Err(Error::Domain(format!("y = {y} is below the neck value a = {av}")));
    }
    if y == av {
        return Ok(0.0);
    }
    if sf.c() == 0.0 {
        // x(y) = a * X(y/a) with X the unit-neck integral: makes the linear
        // scaling in a exact.
        return Ok(av * euclidean_x_normalized(sf.n(), y / av, tol)?);
    }
    hyperbolic_x(sf, av, y, tol)
}

/// Total half-extent `a * Int_1^inf dt / sqrt(t^{2n-2} - 1)` of the Euclidean
/// catenoid; finite exactly when n >= 3 and strictly below `a pi / 2`.
pub fn euclidean_half_extent(n: u32, a: &NeckParam, tol: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("need n >= 2, got {n}")));
    }
    if n == 2 {
        return Err(Error::Divergent(
            "the planar catenoid has unbounded axial extent (n = 2)".into(),
        ));
    }
    Ok(a.value() * euclidean_x_normalized(n, f64::INFINITY, tol)?)
}

/// `Int_1^y dt / sqrt(t^{2n-2} - 1)`; `y` in neck units, possibly infinite.
fn euclidean_x_normalized(n: u32, y: f64, tol: f64) -> Result<f64> {
    if n == 2 && y.is_infinite() {
        return Err(Error::Divergent(
            "the planar catenoid has unbounded axial extent (n = 2)".into(),
        ));
    }
    let p = (2 * n - 2) as f64;
    let cut = 2.0f64.min(y);
    // near part on [1, cut]: t = 1 + u^2
    let near = |u: f64| {
        if u == 0.0 {
            return 2.0 / p.sqrt();
        }
        let big_d = (p * u.mul_add(u, 0.0).ln_1p()).exp_m1();
        2.0 * u / big_d.sqrt()
    };
    let mut total = adaptive_simpson(&near, 0.0, (cut - 1.0).sqrt(), tol)?.value;
    if y > cut {
        // tail via t = 1/v: integrand v^{n-3} / sqrt(1 - v^{2n-2})
        let tail = |v: f64| {
            if v == 0.0 {
                return if n == 3 { 1.0 } else { 0.0 };
            }
            v.powi(n as i32 - 3) / (-(p * v.ln()).exp_m1()).sqrt()
        };
        let v_lo = if y.is_infinite() { 0.0 } else { 1.0 / y };
        total += adaptive_simpson(&tail, v_lo, 1.0 / cut, tol)?.value;
    }
    Ok(total)
}

fn hyperbolic_x(sf: &SpaceForm, a: f64, y: f64, tol: f64) -> Result<f64> {
    let n = sf.n() as f64;
    let beta = (-sf.c()).sqrt();
    let wa = sf.warp(a)?;
    let (fa, fpa) = (wa.f, wa.fp);
    let (ln_fa, ln_fpa) = (sf.ln_f(a), sf.ln_fp(a));
    // L(t) = ln[(f/fa)^{2n-2} (f'/fpa)^2]
    let log_ratio = |t: f64| (2.0 * n - 2.0) * (sf.ln_f(t) - ln_fa) + 2.0 * (sf.ln_fp(t) - ln_fpa);
    // 1/(f'(t) sqrt(e^L - 1)) in log space (valid once L is O(1) or larger)
    let far = |t: f64| {
        let l = log_ratio(t);
        (-sf.ln_fp(t) - 0.5 * (l + (-(-l).exp()).ln_1p())).exp()
    };

    let cut = a + a.max(1.0);
    let near_hi = y.min(cut);
    // near part on [a, near_hi]: t = a + u^2, with cancellation-free ratio
    // deviations from the sinh/cosh product formulas
    let near = |u: f64| {
        if u == 0.0 {
            let kappa = (2.0 * n - 2.0) * fpa / fa - 2.0 * sf.c() * fa / fpa;
            return 2.0 / (fpa * kappa.sqrt());
        }
        let t = a + u * u;
        let half_shift = (beta * 0.5 * u * u).sinh();
        let mid = beta * 0.5 * (t + a);
        let delta1 = 2.0 * mid.cosh() * half_shift / (beta * fa);
        let delta2 = 2.0 * mid.sinh() * half_shift / fpa;
        let l = (2.0 * n - 2.0) * delta1.ln_1p() + 2.0 * delta2.ln_1p();
        2.0 * u * (-sf.ln_fp(t)).exp() / l.exp_m1().sqrt()
    };
    let mut total = adaptive_simpson(&near, 0.0, (near_hi - a).sqrt(), tol)?.value;
    if y > cut {
        if y.is_finite() {
            total += adaptive_simpson(&far, cut, y, tol)?.value;
        } else {
            // tail via t = 1/v, fully in log space (superexponential decay)
            let tail = |v: f64| {
                if v == 0.0 {
                    return 0.0;
                }
                let t = 1.0 / v;
                let l = log_ratio(t);
                (-sf.ln_fp(t) - 0.5 * (l + (-(-l).exp()).ln_1p()) - 2.0 * v.ln()).exp()
            };
            total += adaptive_simpson(&tail, 0.0, 1.0 / cut, tol)?.value;
        }
    }
    Ok(total)
}

/// Samples the generating curve (c <= 0) at `samples` radial values in
/// `[a, y_max]`.
pub fn generating_curve(
    sf: &SpaceForm,
    a: &NeckParam,
    y_max: f64,
    samples: usize,
    tol: f64,
) -> Result<Vec<CurvePoint>> {
    if samples < 2 {
        return Err(Error::Domain("need at least 2 curve samples".into()));
    }
    let av = a.value();
    if !(y_max > av) || !y_max.is_finite() {
        return Err(Error::Domain(format!("need a finite y_max > a, got {y_max}")));
    }
    let mut points = Vec::with_capacity(samples);
    for i in 0..samples {
        let y = av + (y_max - av) * i as f64 / (samples - 1) as f64;
        points.push(CurvePoint { y, x: generating_curve_x(sf, a, y, tol)? });
    }
    Ok(points)
}

/// Smallest positive root of the profile first integral
/// `1 - c x^2 - a^2 x^{2-2n} = 0` (the neck radius `x1(0)`).
pub fn neck_root(sf: &SpaceForm, a: &NeckParam) -> Result<f64> {
    let (c, n, av) = (sf.c(), sf.n() as f64, a.value());
    let p = |x: f64| 1.0 - c * x * x - av * av * x.powf(2.0 - 2.0 * n);
    // upper end of the bracket: P > 0 required there
    let hi = if c > 0.0 {
        // reject within 1e-6 of the double root (degenerate period integrand)
        let a_max = ((n - 1.0).powf(n - 1.0) / (n.powf(n) * c.powf(n - 1.0))).sqrt();
        if av + 1e-6 >= a_max {
            return Err(Error::Domain(format!(
                "no spherical catenoid: a = {av} >= a_max - 1e-6 = {}",
                a_max - 1e-6
            )));
        }
        // critical point of P, where it attains its maximum
        let x_star = (av * av * (n - 1.0) / c).powf(1.0 / (2.0 * n));
        if !(p(x_star) > 0.0) {
            return Err(Error::Domain(format!(
                "first integral admits no positive root for a = {av}, c = {c}, n = {n}"
            )));
        }
        x_star
    } else {
        let mut hi = av.powf(1.0 / (n - 1.0)).max(1.0);
        while p(hi) <= 0.0 {
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(Error::Domain("no positive root of the first integral".into()));
            }
        }
        hi
    };
    let mut lo = hi;
    while p(lo) >= 0.0 {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(Error::Domain("no positive root of the first integral".into()));
        }
    }
    let mut x = bisect(&p, lo, hi, 1e-12)?;
    // Newton polish to full precision: a root offset d shifts the conserved
    // first-integral value by P'(x0) d for the whole trajectory, and the
    // minimality trace divides that by x1 sqrt(q), amplifying it downstream
    let dp = |x: f64| -2.0 * c * x - (2.0 - 2.0 * n) * av * av * x.powf(1.0 - 2.0 * n);
    for _ in 0..3 {
        let d = dp(x);
        if d == 0.0 {
            break;
        }
        x -= p(x) / d;
    }
    Ok(x)
}

/// Integrates the arclength profile ODE `ddx1 = -c x1 + a^2 (n-1) x1^{1-2n}`
/// from the neck (`dx1(0) = 0`) and returns `samples` states on a uniform
/// arclength grid over `[0, s_max]`.
pub fn integrate_profile(
    sf: &SpaceForm,
    a: &NeckParam,
    s_max: f64,
    tol: f64,
    samples: usize,
) -> Result<Vec<ProfilePoint>> {
    if samples < 2 {
        return Err(Error::Domain("need at least 2 profile samples".into()));
    }
    if !(s_max > 0.0) || !s_max.is_finite() {
        return Err(Error::Domain(format!("need finite s_max > 0, got {s_max}")));
    }
    let x0 = neck_root(sf, a)?;
    let (c, n, av) = (sf.c(), sf.n() as f64, a.value());
    let accel = move |x: f64| -c * x + av * av * (n - 1.0) * x.powf(1.0 - 2.0 * n);
    let rhs = move |_s: f64, y: &[f64; 2]| [y[1], accel(y[0])];

    let ds = s_max / (samples - 1) as f64;
    let mut out = Vec::with_capacity(samples);
    out.push(ProfilePoint { s: 0.0, x1: x0, dx1: 0.0, ddx1: accel(x0) });
    let mut next = 1usize;
    // Dense output between accepted steps is a cubic Hermite interpolant;
    // near the neck the profile has 4th derivatives of order x1^{-2n-2}, and
    // this cap keeps the interpolation error on sampled grids below ~1e-11
    let solver = Dopri5::with_tol(tol).with_h_max(2.5e-4);
    solver.integrate(&rhs, 0.0, [x0, 0.0], s_max, |step| {
        while next < samples {
            let s = next as f64 * ds;
            // final grid point owned by the last step
            if s > step.t1 && !(next == samples - 1 && step.t1 >= s_max) {
                break;
            }
            let y = if next == samples - 1 { step.y1 } else { step.interpolate(s) };
            let s_emit = if next == samples - 1 { s_max } else { s };
            out.push(ProfilePoint { s: s_emit, x1: y[0], dx1: y[1], ddx1: accel(y[0]) });
            next += 1;
        }
    })?;
    if out.len() != samples {
        return Err(Error::Numerics(format!(
            "profile sampling produced {} of {samples} points",
            out.len()
        )));
    }
    Ok(out)
}

/// Residual of the profile first integral at a state:
/// `dx1^2 - (1 - c x1^2 - a^2 x1^{2-2n})`.
pub fn first_integral_residual(sf: &SpaceForm, a: &NeckParam, p: &ProfilePoint) -> f64 {
    let (c, n, av) = (sf.c(), sf.n() as f64, a.value());
    p.dx1 * p.dx1 - (1.0 - c * p.x1 * p.x1 - av * av * p.x1.powf(2.0 - 2.0 * n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn sf(c: f64, n: u32) -> SpaceForm {
        SpaceForm::new(c, n).unwrap()
    }

    fn neck(a: f64) -> NeckParam {
        NeckParam::new(a).unwrap()
    }

    #[test]
    fn sin_alpha_is_one_at_neck() {
        for c in [-1.0, 0.0] {
            assert_eq!(sin_alpha(&sf(c, 3), &neck(0.8), 0.8).unwrap(), 1.0);
        }
    }

    #[test]
    fn sin_alpha_euclidean_closed_form() {
        // (a/y)^{n-1} for c = 0
        let v = sin_alpha(&sf(0.0, 3), &neck(1.0), 2.0).unwrap();
        assert!((v - 0.25).abs() < 1e-14);
    }

    #[test]
    fn sin_alpha_decays_to_zero() {
        let v = sin_alpha(&sf(-1.0, 3), &neck(1.0), 500.0).unwrap();
        assert!(v >= 0.0 && v < 1e-100);
    }

    #[test]
    fn sin_alpha_rejects_below_neck() {
        assert!(sin_alpha(&sf(0.0, 3), &neck(1.0), 0.5).is_err());
    }

    #[test]
    fn curve_x_at_neck_is_zero() {
        assert_eq!(generating_curve_x(&sf(0.0, 3), &neck(1.0), 1.0, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn curve_x_rejects_positive_curvature() {
        assert!(matches!(
            generating_curve_x(&sf(1.0, 3), &neck(0.3), 0.5, 1e-10),
            Err(Error::UnsupportedCurvature(_))
        ));
    }

    #[test]
    fn euclidean_half_extent_oracle() {
        // oracle: adaptive high-precision quadrature of Int_1^inf dt/sqrt(t^4-1)
        let v = euclidean_half_extent(3, &neck(1.0), 1e-12).unwrap();
        assert!((v - 1.3110287771460599).abs() < 1e-10, "got {v}");
        assert!(v < FRAC_PI_2);
    }

    #[test]
    fn euclidean_half_extent_decreasing_in_n() {
        let v3 = euclidean_half_extent(3, &neck(1.0), 1e-12).unwrap();
        let v4 = euclidean_half_extent(4, &neck(1.0), 1e-12).unwrap();
        let v5 = euclidean_half_extent(5, &neck(1.0), 1e-12).unwrap();
        assert!((v4 - 0.7010910526627271).abs() < 1e-10);
        assert!((v5 - 0.4819758240751887).abs() < 1e-10);
        assert!(v3 > v4 && v4 > v5);
    }

    #[test]
    fn euclidean_half_extent_exact_linear_scaling() {
        let v1 = euclidean_half_extent(3, &neck(1.0), 1e-12).unwrap();
        let vh = euclidean_half_extent(3, &neck(0.5), 1e-12).unwrap();
        let v2 = euclidean_half_extent(3, &neck(2.0), 1e-12).unwrap();
        assert_eq!(vh, 0.5 * v1);
        assert_eq!(v2, 2.0 * v1);
    }

    #[test]
    fn euclidean_half_extent_diverges_for_n2() {
        assert!(matches!(
            euclidean_half_extent(2, &neck(1.0), 1e-10),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn euclidean_curve_x_matches_oracle() {
        // Int_1^2 dt/sqrt(t^4 - 1)
        let v = generating_curve_x(&sf(0.0, 3), &neck(1.0), 2.0, 1e-12).unwrap();
        assert!((v - 0.8078193339687290).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn euclidean_total_extent_scales_exactly() {
        let v1 = generating_curve_x(&sf(0.0, 3), &neck(1.0), f64::INFINITY, 1e-12).unwrap();
        let v2 = generating_curve_x(&sf(0.0, 3), &neck(2.0), f64::INFINITY, 1e-12).unwrap();
        assert_eq!(v2, 2.0 * v1);
        assert!(v1 < FRAC_PI_2);
    }

    #[test]
    fn hyperbolic_curve_x_matches_oracle() {
        // oracle: mpmath tanh-sinh quadrature of the sinh/cosh integrand
        let m = sf(-1.0, 3);
        let cases = [
            (1.0, 1.5, 0.24425755360446782),
            (1.0, 2.0, 0.26274807215666025),
            (1.0, 3.0, 0.26555738836700778),
            (1.0, f64::INFINITY, 0.26560976557349627),
            (0.2, 0.7, 0.18229068991353523),
            (0.2, 2.0, 0.19295062615647247),
            (0.2, f64::INFINITY, 0.19300612978648767),
        ];
        for (a, y, expected) in cases {
            let v = generating_curve_x(&m, &neck(a), y, 1e-12).unwrap();
            assert!((v - expected).abs() < 1e-9, "a={a} y={y}: got {v}, want {expected}");
        }
    }

    #[test]
    fn curve_x_strictly_increasing() {
        let m = sf(-1.0, 3);
        let a = neck(0.5);
        let mut prev = 0.0;
        for i in 1..40 {
            let y = 0.5 + 0.1 * i as f64;
            let x = generating_curve_x(&m, &a, y, 1e-11).unwrap();
            assert!(x > prev, "x({y}) = {x} not above {prev}");
            prev = x;
        }
    }

    #[test]
    fn quadrature_refinement_converges() {
        // halving the tolerance changes the result by less than the coarser one
        let m = sf(-1.0, 3);
        let a = neck(1.0);
        let coarse = generating_curve_x(&m, &a, 3.0, 1e-6).unwrap();
        let fine = generating_curve_x(&m, &a, 3.0, 1e-12).unwrap();
        assert!((coarse - fine).abs() < 1e-6);
    }

    #[test]
    fn neck_root_euclidean_unit() {
        let r = neck_root(&sf(0.0, 3), &neck(1.0)).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn neck_root_hyperbolic_oracle() {
        // root of 1 + x^2 - x^{-4}
        let r = neck_root(&sf(-1.0, 3), &neck(1.0)).unwrap();
        assert!((r - 0.8688369618327093).abs() < 1e-10, "got {r}");
    }

    #[test]
    fn neck_root_rejects_degenerate_spherical() {
        // a_max = sqrt(4/27) ~ 0.3849 for c = 1, n = 3
        assert!(neck_root(&sf(1.0, 3), &neck(0.5)).is_err());
        assert!(neck_root(&sf(1.0, 3), &neck(1.0)).is_err());
        assert!(neck_root(&sf(1.0, 3), &neck(0.3)).is_ok());
    }

    #[test]
    fn profile_initial_conditions() {
        // c=0, n=3, a=1: x1(0)=1, dx1(0)=0, ddx1(0)=2
        let pts = integrate_profile(&sf(0.0, 3), &neck(1.0), 1.0, 1e-11, 11).unwrap();
        let p0 = &pts[0];
        assert!((p0.x1 - 1.0).abs() < 1e-12);
        assert_eq!(p0.dx1, 0.0);
        assert!((p0.ddx1 - 2.0).abs() < 1e-11);
    }

    #[test]
    fn profile_first_integral_drift() {
        // c = 0: the residual terms stay O(1 + x1^2) with x1 ~ s, so the
        // absolute bound is meaningful over the whole range
        let m = sf(0.0, 3);
        let a = neck(1.0);
        let pts = integrate_profile(&m, &a, 10.0, 1e-12, 101).unwrap();
        for p in &pts {
            let r = first_integral_residual(&m, &a, p);
            assert!(r.abs() <= 1e-8, "residual {r:e} at s = {}", p.s);
        }
    }

    #[test]
    fn hyperbolic_profile_drift_relative() {
        // c = -1 grows like e^s, so dx1^2 and |c| x1^2 reach ~1e8 by s = 10
        // and the round-off floor of their difference alone is ~1e-8; the
        // drift is measured relative to the size of the cancelling terms
        let m = sf(-1.0, 3);
        let a = neck(1.0);
        let pts = integrate_profile(&m, &a, 10.0, 1e-12, 101).unwrap();
        for p in &pts {
            let r = first_integral_residual(&m, &a, p);
            let scale = 1.0 + p.x1 * p.x1 + p.dx1 * p.dx1;
            assert!(r.abs() <= 1e-8 * scale, "residual {r:e} at s = {}", p.s);
        }
        // x1 unbounded increasing for c <= 0
        for w in pts.windows(2) {
            assert!(w[1].x1 > w[0].x1);
        }
    }

    #[test]
    fn spherical_profile_oscillates_between_roots() {
        let m = sf(1.0, 3);
        let a = neck(0.3);
        let r_lo = neck_root(&m, &a).unwrap();
        let pts = integrate_profile(&m, &a, 20.0, 1e-11, 401).unwrap();
        let x_max = pts.iter().map(|p| p.x1).fold(0.0f64, f64::max);
        let x_min = pts.iter().map(|p| p.x1).fold(f64::INFINITY, f64::min);
        assert!((x_min - r_lo).abs() < 1e-6, "profile leaves [roots]: min {x_min}");
        assert!(x_max < 1.0);
        // it actually turns around
        assert!(pts.iter().any(|p| p.dx1 < -1e-3));
        for p in &pts {
            assert!(first_integral_residual(&m, &a, p).abs() < 1e-8);
        }
    }

    #[test]
    fn euclidean_parametrizations_agree() {
        // axial coordinate from the arclength profile vs the direct quadrature
        let m = sf(0.0, 3);
        let a = neck(1.0);
        let pts = integrate_profile(&m, &a, 2.0, 1e-12, 2001).unwrap();
        // z(s) = Int_0^s sqrt(1 - dx1^2) ds, composite trapezoid on the fine grid
        let mut z = 0.0;
        let mut prev = (0.0f64, 1.0f64); // (s, integrand)
        for p in pts.iter().skip(1) {
            let g = (1.0 - p.dx1 * p.dx1).max(0.0).sqrt();
            z += 0.5 * (p.s - prev.0) * (g + prev.1);
            prev = (p.s, g);
            let x_direct = generating_curve_x(&m, &a, p.x1, 1e-12).unwrap();
            assert!(
                (z - x_direct).abs() < 1e-6,
                "s={}: profile z={z}, quadrature x={x_direct}",
                p.s
            );
        }
    }
}
