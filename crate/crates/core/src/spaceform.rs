//! Space-form primitives: curvature dispatch, warp functions, Clifford
//! hypersurface data, and curvature rescaling.

use crate::error::{Error, Result};

/// Ambient space form of sectional curvature `c`, hosting hypersurfaces of
/// dimension `n` (ambient dimension `n + 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceForm {
    c: f64,
    n: u32,
}

impl SpaceForm {
    pub fn new(c: f64, n: u32) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::Domain(format!("curvature must be finite, got {c}")));
        }
        if n < 2 {
            return Err(Error::Domain(format!("hypersurface dimension must be >= 2, got {n}")));
        }
        Ok(SpaceForm { c, n })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Upper end of the admissible radial range: `pi / (2 sqrt(c))` for
    /// spherical curvature, unbounded otherwise.
    pub fn y_max(&self) -> f64 {
        if self.c > 0.0 {
            std::f64::consts::FRAC_PI_2 / self.c.sqrt()
        } else {
            f64::INFINITY
        }
    }

    /// Warp function of the half-space metric `ds^2 = f'(y)^2 dx^2 + dy^2`:
    /// `sin(sqrt(c) y)/sqrt(c)`, `y`, or `sinh(sqrt(-c) y)/sqrt(-c)` by the
    /// sign of the curvature. Continuous in `c` across zero.
    pub fn warp(&self, y: f64) -> Result<WarpProfile> {
        if !(y >= 0.0) {
            return Err(Error::Domain(format!("radial coordinate must be >= 0, got {y}")));
        }
        if y > self.y_max() {
            return Err(Error::Domain(format!(
                "radial coordinate {y} exceeds pi/(2 sqrt(c)) = {}",
                self.y_max()
            )));
        }
        let c = self.c;
        let z = c * y * y;
        let (f, fp) = if z.abs() < 1e-8 {
            // series branch: avoids cancellation in sin/sinh near c = 0
            // f = y (1 - z/6 + z^2/120 - z^3/5040), f' = 1 - z/2 + z^2/24 - z^3/720
            let f = y * (1.0 - z / 6.0 + z * z / 120.0 - z * z * z / 5040.0);
            let fp = 1.0 - z / 2.0 + z * z / 24.0 - z * z * z / 720.0;
            (f, fp)
        } else if c > 0.0 {
            let r = c.sqrt();
            ((r * y).sin() / r, (r * y).cos())
        } else {
            let r = (-c).sqrt();
            ((r * y).sinh() / r, (r * y).cosh())
        };
        Ok(WarpProfile { f, fp, fpp: -c * f })
    }

    /// `ln f(y)`, stable for large arguments (c <= 0 only).
    pub(crate) fn ln_f(&self, y: f64) -> f64 {
        debug_assert!(self.c <= 0.0);
        if self.c == 0.0 {
            return y.ln();
        }
        let r = (-self.c).sqrt();
        let x = r * y;
        if x > 20.0 {
            // ln(sinh x / r) = x - ln 2 - ln r + ln(1 - e^{-2x})
            x - std::f64::consts::LN_2 - r.ln() + (-(-2.0 * x).exp()).ln_1p()
        } else {
            (x.sinh() / r).ln()
        }
    }

    /// `ln f'(y)`, stable for large arguments (c <= 0 only).
    pub(crate) fn ln_fp(&self, y: f64) -> f64 {
        debug_assert!(self.c <= 0.0);
        if self.c == 0.0 {
            return 0.0;
        }
        let x = (-self.c).sqrt() * y;
        if x > 20.0 {
            x - std::f64::consts::LN_2 + (-2.0 * x).exp().ln_1p()
        } else {
            x.cosh().ln()
        }
    }
}

/// Pointwise evaluation of the warp function and its first two derivatives.
#[derive(Debug, Clone, Copy)]
pub struct WarpProfile {
    pub f: f64,
    pub fp: f64,
    pub fpp: f64,
}

/// Parameters of the Clifford minimal hypersurface
/// `S^m(sqrt(m/(cn))) x S^{n-m}(sqrt((n-m)/(cn)))` in the sphere of
/// curvature `c > 0`.
#[derive(Debug, Clone, Copy)]
pub struct CliffordSpec {
    m: u32,
    n: u32,
    c: f64,
}

impl CliffordSpec {
    pub fn new(m: u32, n: u32, c: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("need n >= 2, got {n}")));
        }
        if m < 1 || m > n - 1 {
            return Err(Error::Domain(format!("need 1 <= m <= n-1, got m={m}, n={n}")));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Domain(format!("Clifford data requires c > 0, got {c}")));
        }
        Ok(CliffordSpec { m, n, c })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

/// Radii of the two sphere factors; `r1^2 + r2^2 = 1/c`.
pub fn clifford_radii(spec: &CliffordSpec) -> (f64, f64) {
    let (m, n, c) = (spec.m as f64, spec.n as f64, spec.c);
    ((m / (c * n)).sqrt(), ((n - m) / (c * n)).sqrt())
}

/// Second fundamental form of a Clifford minimal hypersurface: the two
/// constant principal curvatures, their multiplicities, and `|A|^2 = n c`.
#[derive(Debug, Clone, Copy)]
pub struct CliffordSff {
    /// Eigenvalue `sqrt(c (n-m)/m)` with multiplicity `m`.
    pub lambda: f64,
    pub lambda_mult: u32,
    /// Eigenvalue `-sqrt(c m/(n-m))` with multiplicity `n - m`.
    pub nu: f64,
    pub nu_mult: u32,
    /// `m lambda^2 + (n-m) nu^2`.
    pub norm_sq: f64,
}

impl CliffordSff {
    /// `m lambda + (n-m) nu`; zero by minimality.
    pub fn trace(&self) -> f64 {
        self.lambda_mult as f64 * self.lambda + self.nu_mult as f64 * self.nu
    }
}

/// Principal curvature data of the Clifford hypersurface. The unit-sphere
/// eigenvalues `sqrt((n-m)/m)` and `-sqrt(m/(n-m))` are scaled by `sqrt(c)`;
/// they are the pair that makes the trace vanish and `|A|^2 = n` hold
/// (the displayed diagonal in some references carries a typo in the first
/// block; the `|A|^2 = n` computation pins the values used here).
///
/// The eigenvalues are snapped within one ulp so that the trace
/// `m lambda + (n-m) nu` cancels exactly in f64 arithmetic.
pub fn clifford_sff(spec: &CliffordSpec) -> CliffordSff {
    let (m, nm) = (spec.m as f64, (spec.n - spec.m) as f64);
    let x0 = (spec.c * m * nm).sqrt(); // common product m*lambda = (n-m)*|nu|
    let mut lambda = x0 / m;
    let mut nu = -(x0 / nm);
    'outer: for x in ulp_neighbors(x0, 2) {
        if let (Some(l), Some(v)) = (solve_exact_product(m, x), solve_exact_product(nm, x)) {
            lambda = l;
            nu = -v;
            break 'outer;
        }
    }
    let norm_sq = m * lambda * lambda + nm * nu * nu;
    CliffordSff {
        lambda,
        lambda_mult: spec.m,
        nu,
        nu_mult: spec.n - spec.m,
        norm_sq,
    }
}

/// Candidate values within `k` ulps of `x`, nearest first.
fn ulp_neighbors(x: f64, k: u32) -> Vec<f64> {
    let mut out = vec![x];
    let (mut up, mut dn) = (x, x);
    for _ in 0..k {
        up = next_up(up);
        dn = next_down(dn);
        out.push(up);
        out.push(dn);
    }
    out
}

/// Finds `v` near `x / k` with `k * v == x` exactly, searching a few ulps.
fn solve_exact_product(k: f64, x: f64) -> Option<f64> {
    let v0 = x / k;
    if k * v0 == x {
        return Some(v0);
    }
    let (mut up, mut dn) = (v0, v0);
    for _ in 0..16 {
        up = next_up(up);
        dn = next_down(dn);
        if k * up == x {
            return Some(up);
        }
        if k * dn == x {
            return Some(dn);
        }
    }
    None
}

fn next_up(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

fn next_down(x: f64) -> f64 {
    f64::from_bits(x.to_bits() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn warp_at_origin() {
        let sf = SpaceForm::new(-1.0, 3).unwrap();
        let w = sf.warp(0.0).unwrap();
        assert_eq!(w.f, 0.0);
        assert_eq!(w.fp, 1.0);
    }

    #[test]
    fn warp_spherical_equator() {
        let sf = SpaceForm::new(1.0, 3).unwrap();
        let w = sf.warp(FRAC_PI_2).unwrap();
        assert!((w.f - 1.0).abs() < 1e-15);
        assert!(w.fp.abs() < 1e-15);
    }

    #[test]
    fn warp_hyperbolic_unit() {
        // oracle: high-precision series evaluation of sinh/cosh at 1
        let sf = SpaceForm::new(-1.0, 3).unwrap();
        let w = sf.warp(1.0).unwrap();
        assert!((w.f - 1.1752011936438014).abs() < 1e-15);
        assert!((w.fp - 1.5430806348152437).abs() < 1e-15);
    }

    #[test]
    fn warp_rejects_out_of_range() {
        let sf = SpaceForm::new(4.0, 3).unwrap();
        assert!(sf.warp(FRAC_PI_2).is_err()); // y_max = pi/4 for c = 4
        assert!(sf.warp(-0.1).is_err());
    }

    #[test]
    fn warp_continuous_across_zero_curvature() {
        let y = 0.7;
        let w0 = SpaceForm::new(0.0, 3).unwrap().warp(y).unwrap();
        let wp = SpaceForm::new(1e-12, 3).unwrap().warp(y).unwrap();
        let wm = SpaceForm::new(-1e-12, 3).unwrap().warp(y).unwrap();
        assert_eq!(w0.f, y);
        assert!((wp.f - y).abs() < 1e-12);
        assert!((wm.f - y).abs() < 1e-12);
        assert!((wp.fp - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ln_helpers_match_direct_evaluation() {
        let sf = SpaceForm::new(-1.0, 3).unwrap();
        for y in [0.3, 1.0, 5.0, 19.0, 25.0, 400.0] {
            let lf = sf.ln_f(y);
            let lfp = sf.ln_fp(y);
            if y < 20.0 {
                assert!((lf - y.sinh().ln()).abs() < 1e-13);
                assert!((lfp - y.cosh().ln()).abs() < 1e-13);
            } else {
                // asymptotic: ln(sinh y) ~ ln(cosh y) ~ y - ln 2
                assert!((lf - (y - std::f64::consts::LN_2)).abs() < 1e-12);
                assert!((lfp - (y - std::f64::consts::LN_2)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn radii_example() {
        let spec = CliffordSpec::new(1, 3, 1.0).unwrap();
        let (r1, r2) = clifford_radii(&spec);
        assert!((r1 - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((r2 - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn radii_symmetric_case() {
        let spec = CliffordSpec::new(1, 2, 1.0).unwrap();
        let (r1, r2) = clifford_radii(&spec);
        assert_eq!(r1, r2);
    }

    #[test]
    fn sff_theorem_values() {
        // m=1, n=3, c=1: lambda = sqrt(2) (x1), nu = -1/sqrt(2) (x2), |A|^2 = 3
        let sff = clifford_sff(&CliffordSpec::new(1, 3, 1.0).unwrap());
        assert!((sff.lambda - std::f64::consts::SQRT_2).abs() < 1e-14);
        assert_eq!(sff.lambda_mult, 1);
        assert!((sff.nu + 1.0 / std::f64::consts::SQRT_2).abs() < 1e-14);
        assert_eq!(sff.nu_mult, 2);
        assert!((sff.norm_sq - 3.0).abs() < 3e-12);
        assert_eq!(sff.trace(), 0.0);
    }

    #[test]
    fn sff_symmetric_case() {
        let sff = clifford_sff(&CliffordSpec::new(2, 4, 1.0).unwrap());
        assert!((sff.lambda - 1.0).abs() < 1e-14);
        assert!((sff.nu + 1.0).abs() < 1e-14);
        assert!((sff.norm_sq - 4.0).abs() < 4e-12);
        assert_eq!(sff.trace(), 0.0);
    }

    #[test]
    fn sff_curvature_scaling() {
        // |A|^2 scales linearly in c
        let sff = clifford_sff(&CliffordSpec::new(1, 3, 4.0).unwrap());
        assert!((sff.norm_sq - 12.0).abs() < 1e-11);
    }

    #[test]
    fn sff_trace_exact_on_grid() {
        for n in 2..=8u32 {
            for m in 1..n {
                for c in [0.5, 1.0, 2.0] {
                    let sff = clifford_sff(&CliffordSpec::new(m, n, c).unwrap());
                    assert_eq!(sff.trace(), 0.0, "m={m} n={n} c={c}");
                    let rel = (sff.norm_sq - n as f64 * c).abs() / (n as f64 * c);
                    assert!(rel <= 1e-12, "m={m} n={n} c={c}: |A|^2 rel err {rel:e}");
                }
            }
        }
    }

    #[test]
    fn radii_squared_sum() {
        for n in 2..=8u32 {
            for m in 1..n {
                for c in [0.5, 1.0, 2.0] {
                    let (r1, r2) = clifford_radii(&CliffordSpec::new(m, n, c).unwrap());
                    let rel = (r1 * r1 + r2 * r2 - 1.0 / c).abs() * c;
                    assert!(rel < 1e-15, "m={m} n={n} c={c}");
                }
            }
        }
    }
}
