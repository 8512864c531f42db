//! Rotation minimal hypersurfaces of the round sphere via the support
//! function h(theta) of the generating curve.
//!
//! h solves `n h (1 - h^2) h'' + h'^2 + (1 - h^2)(n h^2 - 1) = 0` with
//! `h(0) = a in (0, 1/sqrt(n))`, `h'(0) = 0`, and conserves the first
//! integral `h'^2 + h^2 + C(a) (1/h^2 - 1)^{1/n} = 1`. The solution
//! oscillates between `a` and an upper root `a1`, with period
//!
//! `T(a) = 2 Int_a^{a1} dx / sqrt(G(x))`,  `G(x) = 1 - x^2 - C (1/x^2 - 1)^{1/n}`.
//!
//! The generating curve closes up exactly when `T(a)` is a rational multiple
//! `2 pi p / q` of the full turn; `T` stays strictly between `pi` and
//! `sqrt(2) pi`, so only targets in that window can match. The constant
//! solution `h = 1/sqrt(n)` is the Clifford equilibrium.

use crate::error::{Error, Result};
use crate::num::ode::Dopri5;
use crate::num::quad::adaptive_simpson_with_floor;
use crate::num::roots::{bisect, scan_brackets};

/// Margin kept from the degenerate ends of the initial-value range: near
/// a = 0 the orbit collapses, near a = 1/sqrt(n) both roots of G merge at the
/// Clifford equilibrium and the period integrand degenerates.
const DEGENERACY_GUARD: f64 = 1e-6;

/// State of the support function at one angle.
#[derive(Debug, Clone, Copy)]
pub struct SupportPoint {
    pub theta: f64,
    pub h: f64,
    pub dh: f64,
}

fn check_dimension(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("need n >= 2, got {n}")));
    }
    Ok(n as f64)
}

fn check_initial(n: u32, a: f64) -> Result<f64> {
    let nf = check_dimension(n)?;
    let equilibrium = 1.0 / nf.sqrt();
    if !(a >= DEGENERACY_GUARD && a <= equilibrium - DEGENERACY_GUARD) {
        return Err(Error::Domain(format!(
            "initial value a = {a} outside [{DEGENERACY_GUARD}, 1/sqrt({n}) - {DEGENERACY_GUARD}]"
        )));
    }
    Ok(nf)
}

/// First-integral constant `C(a) = a^{2/n} (1 - a^2)^{1 - 1/n}`.
pub fn capital_c(n: u32, a: f64) -> Result<f64> {
    let nf = check_dimension(n)?;
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Domain(format!("need 0 < a < 1, got {a}")));
    }
    Ok(a.powf(2.0 / nf) * (1.0 - a * a).powf(1.0 - 1.0 / nf))
}

fn g_of(n: f64, big_c: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| 1.0 - x * x - big_c * (1.0 / (x * x) - 1.0).powf(1.0 / n)
}

fn g_prime_of(n: f64, big_c: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| {
        -2.0 * x
            + big_c * (2.0 / (n * x * x * x)) * (1.0 / (x * x) - 1.0).powf(1.0 / n - 1.0)
    }
}

/// Upper turning value `a1`: the root of `G` in `(1/sqrt(n), 1)`.
pub fn upper_root_a1(n: u32, a: f64) -> Result<f64> {
    let nf = check_initial(n, a)?;
    let big_c = capital_c(n, a)?;
    let g = g_of(nf, big_c);
    // G > 0 at the equilibrium, G -> -inf at 1; walk the upper bracket in
    let mut hi = 1.0 - 1e-12;
    let lo = 1.0 / nf.sqrt();
    while g(hi) >= 0.0 {
        hi = 0.5 * (hi + 1.0);
        if 1.0 - hi < 1e-15 {
            return Err(Error::NoSolution("no upper turning value below 1".into()));
        }
    }
    bisect(&g, lo, hi, 1e-14)
}

/// Oscillation period `T(a)` of the support function, by quadrature with
/// square-root substitutions `x = a + u^2`, `x = a1 - u^2` at the turning
/// points.
///
/// The radicand is evaluated as the exact difference `G(x) - G(e)` about the
/// turning point `e`. Writing `G(x) = 1 - x^2 - C phi(x)` with
/// `phi(x) = (1/x^2 - 1)^{1/n}`,
///
/// `G(x) - G(e) = (e - x)(e + x) - C phi(e) expm1((ln1p(d2/(1-e^2)) - 2 ln1p((x-e)/e)) / n)`
///
/// which is free of the catastrophic cancellation the naive `G(x)` suffers
/// near a root; the residual relative noise `~ eps * 2e / |G'(e)|` is passed
/// to the quadrature as its round-off floor (it blows up only as the two
/// roots merge at the Clifford equilibrium).
pub fn period(n: u32, a: f64, tol: f64) -> Result<f64> {
    let nf = check_initial(n, a)?;
    let big_c = capital_c(n, a)?;
    let a1 = upper_root_a1(n, a)?;
    let gp = g_prime_of(nf, big_c);
    // delta = x - e is kept exact (never recovered from a rounded x, which
    // would quantize it to multiples of eps * e and wreck small u)
    let g_diff = |delta: f64, e: f64, phi_e: f64| {
        let d2 = -delta * (2.0 * e + delta);
        let dl = (d2 / (1.0 - e * e)).ln_1p() - 2.0 * (delta / e).ln_1p();
        d2 - big_c * phi_e * (dl / nf).exp_m1()
    };
    let phi = |e: f64| (1.0 / (e * e) - 1.0).powf(1.0 / nf);
    let (phi_a, phi_a1) = (phi(a), phi(a1));
    let (gp_a, gp_a1) = (gp(a), gp(a1));
    let mid = 0.5 * (a + a1);
    let lower = |u: f64| {
        if u == 0.0 { 2.0 / gp_a.sqrt() } else { 2.0 * u / g_diff(u * u, a, phi_a).sqrt() }
    };
    let upper = |u: f64| {
        if u == 0.0 {
            2.0 / (-gp_a1).sqrt()
        } else {
            2.0 * u / g_diff(-u * u, a1, phi_a1).sqrt()
        }
    };
    let noise = |e: f64, gpe: f64| (4.0 * f64::EPSILON * e / gpe.abs()).max(3e-13);
    let half = adaptive_simpson_with_floor(&lower, 0.0, (mid - a).sqrt(), tol, noise(a, gp_a))?
        .value
        + adaptive_simpson_with_floor(&upper, 0.0, (a1 - mid).sqrt(), tol, noise(a1, gp_a1))?
            .value;
    Ok(2.0 * half)
}

/// Integrates the support ODE from the lower turning point and returns
/// `samples` states on a uniform grid over `[0, theta_max]`.
pub fn integrate_support(
    n: u32,
    a: f64,
    theta_max: f64,
    tol: f64,
    samples: usize,
) -> Result<Vec<SupportPoint>> {
    let nf = check_initial(n, a)?;
    if samples < 2 {
        return Err(Error::Domain("need at least 2 support samples".into()));
    }
    if !(theta_max > 0.0) || !theta_max.is_finite() {
        return Err(Error::Domain(format!("need finite theta_max > 0, got {theta_max}")));
    }
    let rhs = support_rhs(nf);
    let dtheta = theta_max / (samples - 1) as f64;
    let mut out = Vec::with_capacity(samples);
    out.push(SupportPoint { theta: 0.0, h: a, dh: 0.0 });
    let mut next = 1usize;
    // dense output between steps is a cubic Hermite interpolant; small-a
    // orbits have sharp turning points, and this cap keeps the sampled
    // first-integral drift below ~1e-9 across the admissible range
    let solver = Dopri5::with_tol(tol).with_h_max(0.002);
    solver.integrate(&rhs, 0.0, [a, 0.0], theta_max, |step| {
        while next < samples {
            let theta = next as f64 * dtheta;
            if theta > step.t1 && !(next == samples - 1 && step.t1 >= theta_max) {
                break;
            }
            let (th, y) = if next == samples - 1 {
                (theta_max, step.y1)
            } else {
                (theta, step.interpolate(theta))
            };
            out.push(SupportPoint { theta: th, h: y[0], dh: y[1] });
            next += 1;
        }
    })?;
    if out.len() != samples {
        return Err(Error::Numerics(format!(
            "support sampling produced {} of {samples} points",
            out.len()
        )));
    }
    Ok(out)
}

fn support_rhs(nf: f64) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
    move |_theta: f64, y: &[f64; 2]| {
        let (h, dh) = (y[0], y[1]);
        let one_m = 1.0 - h * h;
        [dh, (-dh * dh - one_m * (nf * h * h - 1.0)) / (nf * h * one_m)]
    }
}

/// Period measured dynamically: the angle of the second `h' = 0` crossing,
/// i.e. the first return to the lower turning point. Independent check on
/// [`period`].
pub fn support_return_time(n: u32, a: f64, tol: f64) -> Result<f64> {
    let nf = check_initial(n, a)?;
    let solver = Dopri5::with_tol(tol).with_h_max(0.01);
    // T < sqrt(2) pi always; 3 pi is a safe horizon for two turning points
    let hits = solver.integrate_until_crossings(
        &support_rhs(nf),
        0.0,
        [a, 0.0],
        3.0 * std::f64::consts::PI,
        &|_theta, y| y[1],
        2,
    )?;
    Ok(hits[1].0)
}

/// First-integral residual `h'^2 + h^2 + C(a) (1/h^2 - 1)^{1/n} - 1`.
pub fn first_integral_residual(n: u32, a: f64, p: &SupportPoint) -> Result<f64> {
    let nf = check_dimension(n)?;
    let big_c = capital_c(n, a)?;
    Ok(p.dh * p.dh + p.h * p.h + big_c * (1.0 / (p.h * p.h) - 1.0).powf(1.0 / nf) - 1.0)
}

/// All initial values `a` whose period equals `2 pi p / q`, found by scanning
/// `T(a) - 2 pi p / q` for sign changes on `a_steps` grid points and refining
/// each bracket by bisection. Every candidate is re-verified against the
/// target before being reported. Empty result means no closed generating
/// curve exists with that winding ratio.
pub fn find_closed(n: u32, p: u32, q: u32, a_steps: usize, tol: f64) -> Result<Vec<f64>> {
    check_dimension(n)?;
    if p == 0 || q == 0 {
        return Err(Error::Domain("winding numbers p, q must be positive".into()));
    }
    if a_steps < 2 {
        return Err(Error::Domain("need at least 2 scan steps".into()));
    }
    let target = 2.0 * std::f64::consts::PI * p as f64 / q as f64;
    // T is confined to (pi, sqrt(2) pi); don't scan for unreachable targets
    if target <= std::f64::consts::PI || target >= std::f64::consts::SQRT_2 * std::f64::consts::PI
    {
        return Ok(Vec::new());
    }
    let lo = DEGENERACY_GUARD;
    let hi = 1.0 / (n as f64).sqrt() - DEGENERACY_GUARD;
    let mismatch = |a: f64| match period(n, a, tol) {
        Ok(t) => t - target,
        Err(_) => f64::NAN,
    };
    let mut roots = Vec::new();
    for (blo, bhi) in scan_brackets(&mismatch, lo, hi, a_steps) {
        let root = if blo == bhi { blo } else { bisect(&mismatch, blo, bhi, 1e-12)? };
        let t = period(n, root, tol)?;
        if (t - target).abs() <= 1e-8 {
            roots.push(root);
        }
    }
    Ok(roots)
}

/// Projects support states to the unit disk: the generating curve in the
/// totally geodesic 2-sphere, seen in the coordinates
/// `(h sin(theta) + h' cos(theta), -h cos(theta) + h' sin(theta))`.
pub fn disk_coords(points: &[SupportPoint]) -> Vec<[f64; 2]> {
    points
        .iter()
        .map(|p| {
            let (s, c) = p.theta.sin_cos();
            [p.h * s + p.dh * c, -p.h * c + p.dh * s]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn capital_c_oracle_values() {
        // frozen from 50-digit evaluation of a^{2/3} (1-a^2)^{2/3}
        let c = capital_c(3, 0.42231).unwrap();
        assert!((c - 0.49379533845125010).abs() < 1e-15, "got {c}");
        let ceq = capital_c(3, 1.0 / 3.0f64.sqrt()).unwrap();
        assert!((ceq - 0.529133683989399825).abs() < 1e-15, "got {ceq}");
    }

    #[test]
    fn capital_c_maximal_at_equilibrium() {
        let ceq = capital_c(3, 1.0 / 3.0f64.sqrt()).unwrap();
        for i in 1..20 {
            let a = 0.028 * i as f64;
            assert!(capital_c(3, a).unwrap() <= ceq);
        }
    }

    #[test]
    fn upper_root_matches_cubic_closed_form() {
        // for n = 3, G has the factor root a1 = (-a + sqrt(4 - 3 a^2)) / 2
        let a = 0.42231;
        let a1 = upper_root_a1(3, a).unwrap();
        assert!((a1 - 0.7195655262188000).abs() < 1e-12, "got {a1}");
        let closed = (-a + (4.0 - 3.0 * a * a).sqrt()) / 2.0;
        assert!((a1 - closed).abs() < 1e-12);
    }

    #[test]
    fn period_reference_orbit() {
        // frozen from tanh-sinh quadrature at 50 digits
        let t = period(3, 0.42231, 1e-12).unwrap();
        assert!((t - 4.398228828335611).abs() < 1e-9, "got {t}");
        assert!((t / PI - 1.3999997177577755).abs() < 1e-9);
    }

    #[test]
    fn period_limits() {
        // a -> 0: T decreases toward pi (slow logarithmic approach, so the
        // bound at a = 1e-4 is loose but the frozen value is tight)
        for (n, t_small) in [(3, 3.1678111325757362), (4, 3.2075909003850464), (5, 3.2411528653418401)] {
            let t = period(n, 1e-4, 1e-12).unwrap();
            assert!((t - t_small).abs() < 1e-6, "n={n}: got {t}");
            assert!(t > PI && t - PI < 0.11);
        }
        // a -> 1/sqrt(n): T -> sqrt(2) pi
        for n in [3u32, 4, 5] {
            let a = 1.0 / (n as f64).sqrt() - 1e-4;
            let t = period(n, a, 1e-12).unwrap();
            assert!((t - SQRT_2 * PI).abs() < 1e-6, "n={n}: got {t}");
            assert!(t < SQRT_2 * PI);
        }
    }

    #[test]
    fn period_monotone_for_n3() {
        let mut prev = 0.0;
        for i in 1..30 {
            let a = 0.019 * i as f64;
            let t = period(3, a, 1e-11).unwrap();
            assert!(t > prev, "T({a}) = {t} not above {prev}");
            prev = t;
        }
    }

    #[test]
    fn period_rejects_degenerate_initials() {
        assert!(period(3, 0.0, 1e-10).is_err());
        assert!(period(3, 1e-9, 1e-10).is_err());
        assert!(period(3, 1.0 / 3.0f64.sqrt(), 1e-10).is_err());
        assert!(period(3, 0.9, 1e-10).is_err());
    }

    #[test]
    fn ode_return_time_matches_quadrature() {
        for a in [0.1, 0.3, 0.42231, 0.5] {
            let t_quad = period(3, a, 1e-12).unwrap();
            let t_ode = support_return_time(3, a, 1e-12).unwrap();
            assert!((t_quad - t_ode).abs() < 1e-8, "a={a}: {t_quad} vs {t_ode}");
        }
    }

    #[test]
    fn support_conserves_first_integral() {
        let pts = integrate_support(3, 0.3, 12.0, 1e-12, 301).unwrap();
        for p in &pts {
            let r = first_integral_residual(3, 0.3, p).unwrap();
            assert!(r.abs() < 1e-9, "residual {r:e} at theta = {}", p.theta);
        }
        // oscillation stays inside [a, a1]
        let a1 = upper_root_a1(3, 0.3).unwrap();
        for p in &pts {
            assert!(p.h >= 0.3 - 1e-9 && p.h <= a1 + 1e-9);
        }
    }

    #[test]
    fn find_closed_seven_tenths() {
        // the single n = 3 initial value with T = 1.4 pi (frozen oracle root)
        let roots = find_closed(3, 7, 10, 2000, 1e-11).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 0.422311541505819).abs() < 1e-9, "got {}", roots[0]);
    }

    #[test]
    fn find_closed_unreachable_targets() {
        // 10 pi / 7 and 1.45 pi both exceed sqrt(2) pi
        assert!(find_closed(3, 5, 7, 400, 1e-10).unwrap().is_empty());
        assert!(find_closed(3, 29, 40, 400, 1e-10).unwrap().is_empty());
        // at or below pi
        assert!(find_closed(3, 1, 2, 400, 1e-10).unwrap().is_empty());
    }

    #[test]
    fn disk_curve_stays_inside_unit_disk() {
        let pts = integrate_support(3, 0.42231, 9.0, 1e-12, 200).unwrap();
        for xy in disk_coords(&pts) {
            let r2 = xy[0] * xy[0] + xy[1] * xy[1];
            assert!(r2 < 1.0, "|point|^2 = {r2}");
        }
    }

    #[test]
    fn disk_curve_closes_at_rational_period() {
        // follow the 7/10 orbit for 10 half-oscillations... q turns = p periods:
        // after q * T = 2 pi p the curve must return to its start
        let a = 0.422311541505819;
        let t = period(3, a, 1e-12).unwrap();
        let total = 10.0 * t; // = 7 full turns
        let pts = integrate_support(3, a, total, 1e-12, 4001).unwrap();
        let xy = disk_coords(&pts);
        let (first, last) = (xy[0], xy[xy.len() - 1]);
        let gap = ((first[0] - last[0]).powi(2) + (first[1] - last[1]).powi(2)).sqrt();
        assert!(gap < 1e-6, "closure gap {gap:e}");
        assert!((total - 14.0 * PI).abs() < 1e-4);
    }
}
