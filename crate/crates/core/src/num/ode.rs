//! Adaptive Dormand-Prince 5(4) integration with event detection.
//!
//! Second-order geometric ODEs in this crate are integrated as first-order
//! systems of dimension 2. Turning points (h' = 0 crossings) are located to
//! sub-tolerance accuracy with cubic Hermite interpolation inside the
//! accepted step followed by bisection in time.

use crate::error::{Error, Result};

/// One accepted integrator step, with enough data for dense output.
#[derive(Debug, Clone, Copy)]
pub struct Step<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    pub f0: [f64; N],
    pub f1: [f64; N],
}

impl<const N: usize> Step<N> {
    /// Cubic Hermite interpolant at `t` within `[t0, t1]`.
    pub fn interpolate(&self, t: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        let u = (t - self.t0) / h;
        let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        let h10 = u * (1.0 - u) * (1.0 - u);
        let h01 = u * u * (3.0 - 2.0 * u);
        let h11 = u * u * (u - 1.0);
        let mut y = [0.0; N];
        for i in 0..N {
            y[i] = h00 * self.y0[i] + h10 * h * self.f0[i] + h01 * self.y1[i] + h11 * h * self.f1[i];
        }
        y
    }
}

/// Adaptive Dormand-Prince 5(4) integrator.
#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub h_init: f64,
    /// Cap on the step size. Dense output between accepted steps is a cubic
    /// Hermite interpolant, so callers that sample inside steps keep this
    /// small enough for the interpolation error, not just the local error.
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Dopri5 {
            abs_tol: 1e-11,
            rel_tol: 1e-11,
            h_init: 1e-3,
            h_max: f64::INFINITY,
            max_steps: 2_000_000,
        }
    }
}

impl Dopri5 {
    pub fn with_tol(tol: f64) -> Self {
        Dopri5 { abs_tol: tol, rel_tol: tol, ..Dopri5::default() }
    }

    pub fn with_h_max(self, h_max: f64) -> Self {
        Dopri5 { h_max, ..self }
    }

    /// Integrates `dy/dt = f(t, y)` from `t0` to `t_end` (either direction),
    /// calling `on_step` after every accepted step. Returns the final state.
    pub fn integrate<const N: usize>(
        &self,
        f: &impl Fn(f64, &[f64; N]) -> [f64; N],
        t0: f64,
        y0: [f64; N],
        t_end: f64,
        mut on_step: impl FnMut(&Step<N>),
    ) -> Result<[f64; N]> {
        if t0 == t_end {
            return Ok(y0);
        }
        let dir = (t_end - t0).signum();
        let mut t = t0;
        let mut y = y0;
        let mut k1 = f(t, &y);
        let mut h = dir * self.h_init.abs().min((t_end - t0).abs()).min(self.h_max);
        let mut steps = 0usize;
        while (t_end - t) * dir > 0.0 {
            if steps >= self.max_steps {
                return Err(Error::Numerics(format!(
                    "step budget exhausted at t={t} (h={h:e})"
                )));
            }
            steps += 1;
            // land exactly on t_end for the final step; a step that would end
            // within a relative sliver of t_end is stretched to it, so that
            // rounding never leaves an impossibly small remainder to cover
            let last = (t_end - t - h) * dir <= 1e-9 * h.abs();
            if last {
                h = t_end - t;
            }
            if h.abs() < 1e-14 * (1.0 + t.abs()) {
                return Err(Error::Numerics(format!("step size collapse at t={t}")));
            }
            let (y_new, k_new, err) = dopri5_step(f, t, &y, &k1, h);
            let mut scale = 0.0f64;
            for i in 0..N {
                let tol = self.abs_tol + self.rel_tol * y[i].abs().max(y_new[i].abs());
                scale = scale.max(err[i].abs() / tol);
            }
            if scale <= 1.0 {
                let t1 = if last { t_end } else { t + h };
                let step = Step { t0: t, t1, y0: y, y1: y_new, f0: k1, f1: k_new };
                on_step(&step);
                t = t1;
                y = y_new;
                k1 = k_new; // FSAL
            }
            let factor = if scale > 0.0 {
                (0.9 * scale.powf(-0.2)).clamp(0.2, 5.0)
            } else {
                5.0
            };
            h = (h * factor).clamp(-self.h_max, self.h_max);
        }
        Ok(y)
    }

    /// Integrates until `event(t, y)` crosses zero `count` times (crossings at
    /// the initial point are not counted). Returns the refined crossing times
    /// and states, in order.
    pub fn integrate_until_crossings<const N: usize>(
        &self,
        f: &impl Fn(f64, &[f64; N]) -> [f64; N],
        t0: f64,
        y0: [f64; N],
        t_max: f64,
        event: &impl Fn(f64, &[f64; N]) -> f64,
        count: usize,
    ) -> Result<Vec<(f64, [f64; N])>> {
        let mut hits: Vec<(f64, [f64; N])> = Vec::new();
        let mut g_prev = event(t0, &y0);
        let mut found = Ok(());
        self.integrate(f, t0, y0, t_max, |step| {
            if hits.len() >= count || found.is_err() {
                return;
            }
            let g_new = event(step.t1, &step.y1);
            let crossed = (g_prev != 0.0 && g_new != 0.0 && g_prev.signum() != g_new.signum())
                || (g_new == 0.0 && g_prev != 0.0);
            if crossed {
                let g = |t: f64| event(t, &step.interpolate(t));
                match crate::num::roots::bisect(&g, step.t0, step.t1, 1e-13 * (1.0 + step.t1.abs()))
                {
                    Ok(tc) => hits.push((tc, step.interpolate(tc))),
                    Err(e) => found = Err(e),
                }
            }
            g_prev = g_new;
        })?;
        found?;
        if hits.len() < count {
            return Err(Error::NoSolution(format!(
                "only {} of {count} event crossings before t={t_max}",
                hits.len()
            )));
        }
        Ok(hits)
    }
}

/// One Dormand-Prince 5(4) step: returns (y5, f(t+h, y5), error estimate).
fn dopri5_step<const N: usize>(
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
) -> ([f64; N], [f64; N], [f64; N]) {
    let axpy = |coeffs: &[(f64, &[f64; N])]| {
        let mut out = *y;
        for &(c, k) in coeffs {
            for i in 0..N {
                out[i] += h * c * k[i];
            }
        }
        out
    };
    let k2 = f(t + h / 5.0, &axpy(&[(1.0 / 5.0, k1)]));
    let k3 = f(t + 3.0 * h / 10.0, &axpy(&[(3.0 / 40.0, k1), (9.0 / 40.0, &k2)]));
    let k4 = f(
        t + 4.0 * h / 5.0,
        &axpy(&[(44.0 / 45.0, k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)]),
    );
    let k5 = f(
        t + 8.0 * h / 9.0,
        &axpy(&[
            (19372.0 / 6561.0, k1),
            (-25360.0 / 2187.0, &k2),
            (64448.0 / 6561.0, &k3),
            (-212.0 / 729.0, &k4),
        ]),
    );
    let k6 = f(
        t + h,
        &axpy(&[
            (9017.0 / 3168.0, k1),
            (-355.0 / 33.0, &k2),
            (46732.0 / 5247.0, &k3),
            (49.0 / 176.0, &k4),
            (-5103.0 / 18656.0, &k5),
        ]),
    );
    let y5 = axpy(&[
        (35.0 / 384.0, k1),
        (500.0 / 1113.0, &k3),
        (125.0 / 192.0, &k4),
        (-2187.0 / 6784.0, &k5),
        (11.0 / 84.0, &k6),
    ]);
    let k7 = f(t + h, &y5);
    // embedded 4th-order solution
    let y4 = axpy(&[
        (5179.0 / 57600.0, k1),
        (7571.0 / 16695.0, &k3),
        (393.0 / 640.0, &k4),
        (-92097.0 / 339200.0, &k5),
        (187.0 / 2100.0, &k6),
        (1.0 / 40.0, &k7),
    ]);
    let mut err = [0.0; N];
    for i in 0..N {
        err[i] = y5[i] - y4[i];
    }
    (y5, k7, err)
}
