//! Second-fundamental-form analytics: principal curvatures and |A|^2 along
//! catenoid profiles, the axial Laplacian for rotation-invariant fields, the
//! elliptic residual `|A| d|A| + |A|^4 - (2/n)|grad|A||^2 - nc|A|^2`, and the
//! E-term decomposition `|grad A|^2 = (1 + 2/n) |grad |A||^2 + E` on raw
//! diagonalized tensor data.
//!
//! The decomposition identity holds for n = 2 on every trace-free symmetric
//! tensor, but for n >= 3 it needs the rotation structure of the frame it was
//! derived in: one distinguished direction with `lambda_k^2 = (n-1)|A|^2 / n`
//! carrying all the double-index derivative components, proportional to the
//! eigenvalues. [`random_rotation_admissible`] generates exactly that class;
//! [`random_admissible`] generates the larger trace-free class on which only
//! the inequality `|grad A|^2 >= (1 + 2/n) |grad |A||^2` survives.

use crate::error::{Error, Result};
use crate::profile::{NeckParam, ProfilePoint};
use crate::spaceform::SpaceForm;
use rand::Rng;

/// Eigenvalues of the second fundamental form of a rotation hypersurface:
/// `lambda` with multiplicity n-1 (spherical directions) and `mu` with
/// multiplicity 1 (along the generating curve).
#[derive(Debug, Clone, Copy)]
pub struct PrincipalCurvatures {
    pub lambda: f64,
    pub mu: f64,
    pub n: u32,
}

impl PrincipalCurvatures {
    /// Mean-curvature trace `(n-1) lambda + mu`; zero on minimal profiles.
    pub fn trace(&self) -> f64 {
        (self.n - 1) as f64 * self.lambda + self.mu
    }

    pub fn norm_sq(&self) -> f64 {
        (self.n - 1) as f64 * self.lambda * self.lambda + self.mu * self.mu
    }
}

/// Principal curvatures at a profile state:
/// `lambda = -sqrt(1 - c x1^2 - dx1^2) / x1`, `mu = (ddx1 + c x1) / sqrt(...)`.
pub fn principal_curvatures(sf: &SpaceForm, p: &ProfilePoint) -> Result<PrincipalCurvatures> {
    let q = 1.0 - sf.c() * p.x1 * p.x1 - p.dx1 * p.dx1;
    if !(q > 0.0) || !(p.x1 > 0.0) {
        return Err(Error::Domain(format!(
            "not a valid profile state: x1 = {}, 1 - c x1^2 - dx1^2 = {q}",
            p.x1
        )));
    }
    let root = q.sqrt();
    Ok(PrincipalCurvatures {
        lambda: -root / p.x1,
        mu: (p.ddx1 + sf.c() * p.x1) / root,
        n: sf.n(),
    })
}

/// Squared second-fundamental-form norm of the catenoid with neck parameter
/// `a` at radius `x1`: `a^2 n (n-1) x1^{-2n}`.
pub fn sff_norm_sq(sf: &SpaceForm, a: &NeckParam, x1: f64) -> Result<f64> {
    if !(x1 > 0.0) {
        return Err(Error::Domain(format!("need x1 > 0, got {x1}")));
    }
    let n = sf.n() as f64;
    let av = a.value();
    Ok(av * av * n * (n - 1.0) * x1.powf(-2.0 * n))
}

/// A rotation-invariant scalar sampled on an arclength grid, with its first
/// two arclength derivatives.
#[derive(Debug, Clone)]
pub struct AxialField {
    pub s: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub ddphi: Vec<f64>,
}

impl AxialField {
    pub fn new(s: Vec<f64>, phi: Vec<f64>, dphi: Vec<f64>, ddphi: Vec<f64>) -> Result<Self> {
        let len = s.len();
        if phi.len() != len || dphi.len() != len || ddphi.len() != len {
            return Err(Error::GridMismatch(format!(
                "component lengths {}/{}/{}/{} differ",
                len,
                phi.len(),
                dphi.len(),
                ddphi.len()
            )));
        }
        if !s.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::GridMismatch("arclength grid not strictly increasing".into()));
        }
        Ok(AxialField { s, phi, dphi, ddphi })
    }
}

/// Laplacian and squared gradient of an axial field on a profile.
#[derive(Debug, Clone)]
pub struct AxialDerivatives {
    pub laplacian: Vec<f64>,
    pub grad_sq: Vec<f64>,
}

/// Laplace-Beltrami operator of the induced metric on rotation-invariant
/// fields: `dphi'' + (n-1) (dx1/x1) dphi'`, with `|grad phi|^2 = dphi^2`.
pub fn axial_laplacian(
    sf: &SpaceForm,
    profile: &[ProfilePoint],
    field: &AxialField,
) -> Result<AxialDerivatives> {
    if profile.len() != field.s.len() {
        return Err(Error::GridMismatch(format!(
            "profile has {} points, field has {}",
            profile.len(),
            field.s.len()
        )));
    }
    for (p, s) in profile.iter().zip(&field.s) {
        if (p.s - s).abs() > 1e-12 * (1.0 + s.abs()) {
            return Err(Error::GridMismatch(format!(
                "arclength grids differ: profile {} vs field {s}",
                p.s
            )));
        }
    }
    let nm1 = (sf.n() - 1) as f64;
    let mut laplacian = Vec::with_capacity(profile.len());
    let mut grad_sq = Vec::with_capacity(profile.len());
    for (i, p) in profile.iter().enumerate() {
        laplacian.push(field.ddphi[i] + nm1 * (p.dx1 / p.x1) * field.dphi[i]);
        grad_sq.push(field.dphi[i] * field.dphi[i]);
    }
    Ok(AxialDerivatives { laplacian, grad_sq })
}

/// `|A|` and its arclength derivatives along a profile, from the closed form
/// `|A| = a sqrt(n(n-1)) x1^{-n}` differentiated through the profile ODE.
pub fn sff_norm_field(sf: &SpaceForm, a: &NeckParam, profile: &[ProfilePoint]) -> AxialField {
    let n = sf.n() as f64;
    let k = a.value() * (n * (n - 1.0)).sqrt();
    let mut s = Vec::with_capacity(profile.len());
    let (mut phi, mut dphi, mut ddphi) =
        (Vec::with_capacity(profile.len()), Vec::with_capacity(profile.len()), Vec::with_capacity(profile.len()));
    for p in profile {
        let x = p.x1;
        s.push(p.s);
        phi.push(k * x.powf(-n));
        dphi.push(-k * n * x.powf(-n - 1.0) * p.dx1);
        ddphi.push(k * n * ((n + 1.0) * x.powf(-n - 2.0) * p.dx1 * p.dx1 - x.powf(-n - 1.0) * p.ddx1));
    }
    AxialField { s, phi, dphi, ddphi }
}

/// Residual of the elliptic identity with E = 0,
/// `|A| d|A| + |A|^4 - (2/n)|grad|A||^2 - nc|A|^2`, at every profile point,
/// with all derivatives taken from the closed forms. Vanishes identically on
/// catenoids.
pub fn simons_residual(sf: &SpaceForm, a: &NeckParam, profile: &[ProfilePoint]) -> Result<Vec<f64>> {
    let field = sff_norm_field(sf, a, profile);
    let der = axial_laplacian(sf, profile, &field)?;
    let n = sf.n() as f64;
    Ok((0..profile.len())
        .map(|i| {
            let phi = field.phi[i];
            phi * der.laplacian[i] + phi.powi(4) - (2.0 / n) * der.grad_sq[i]
                - n * sf.c() * phi * phi
        })
        .collect())
}

/// Same residual with `|A|` differentiated by centered second-order finite
/// differences on the (uniform) arclength grid instead of the closed forms.
/// Returned for interior points only (indices 1..len-1), since one-sided end
/// stencils would pollute convergence measurements.
pub fn simons_residual_fd(
    sf: &SpaceForm,
    a: &NeckParam,
    profile: &[ProfilePoint],
) -> Result<Vec<f64>> {
    if profile.len() < 3 {
        return Err(Error::GridMismatch("need at least 3 profile points".into()));
    }
    let h = profile[1].s - profile[0].s;
    for w in profile.windows(2) {
        if ((w[1].s - w[0].s) - h).abs() > 1e-9 * h {
            return Err(Error::GridMismatch("finite differences need a uniform grid".into()));
        }
    }
    let n = sf.n() as f64;
    let k = a.value() * (n * (n - 1.0)).sqrt();
    let phi: Vec<f64> = profile.iter().map(|p| k * p.x1.powf(-n)).collect();
    let mut out = Vec::with_capacity(profile.len() - 2);
    for i in 1..profile.len() - 1 {
        let dphi = (phi[i + 1] - phi[i - 1]) / (2.0 * h);
        let ddphi = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) / (h * h);
        let p = &profile[i];
        let lap = ddphi + (n - 1.0) * (p.dx1 / p.x1) * dphi;
        out.push(phi[i] * lap + phi[i].powi(4) - (2.0 / n) * dphi * dphi
            - n * sf.c() * phi[i] * phi[i]);
    }
    Ok(out)
}

/// Diagonalized second fundamental form and its covariant derivative at a
/// point: eigenvalues `lambda_i` and the fully symmetric tensor `h_ijk` with
/// `sum_i lambda_i = 0` and `sum_i h_iik = 0` for each k.
#[derive(Debug, Clone)]
pub struct SFFData {
    lambda: Vec<f64>,
    h: Vec<f64>, // n^3, row-major (i, j, k)
}

impl SFFData {
    pub fn new(lambda: Vec<f64>, h: Vec<f64>) -> Result<Self> {
        let n = lambda.len();
        if n < 2 {
            return Err(Error::Domain(format!("need dimension >= 2, got {n}")));
        }
        if h.len() != n * n * n {
            return Err(Error::Domain(format!(
                "derivative tensor has {} entries, expected {}",
                h.len(),
                n * n * n
            )));
        }
        let scale = h.iter().fold(1e-30f64, |m, v| m.max(v.abs()));
        let lscale = lambda.iter().fold(1e-30f64, |m, v| m.max(v.abs()));
        let at = |i: usize, j: usize, k: usize| h[(i * n + j) * n + k];
        let ltrace: f64 = lambda.iter().sum();
        if ltrace.abs() > 1e-10 * lscale {
            return Err(Error::Domain(format!("eigenvalues not trace-free: sum = {ltrace:e}")));
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = at(i, j, k);
                    if (v - at(i, k, j)).abs() > 1e-10 * scale
                        || (v - at(j, i, k)).abs() > 1e-10 * scale
                    {
                        return Err(Error::Domain(format!(
                            "derivative tensor not symmetric at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        for k in 0..n {
            let t: f64 = (0..n).map(|i| at(i, i, k)).sum();
            if t.abs() > 1e-10 * scale {
                return Err(Error::Domain(format!(
                    "derivative tensor trace sum_i h_ii{k} = {t:e} nonzero"
                )));
            }
        }
        Ok(SFFData { lambda, h })
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn h(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.dim();
        self.h[(i * n + j) * n + k]
    }

    /// `|A|^2 = sum lambda_i^2`.
    pub fn norm_sq(&self) -> f64 {
        self.lambda.iter().map(|l| l * l).sum()
    }

    /// `|grad A|^2 = sum h_ijk^2`.
    pub fn grad_full_sq(&self) -> f64 {
        self.h.iter().map(|v| v * v).sum()
    }

    /// `|grad |A||^2 = sum_k (sum_i lambda_i h_iik)^2 / |A|^2`.
    pub fn grad_norm_sq(&self) -> Result<f64> {
        let a2 = self.norm_sq();
        if a2 < 1e-14 {
            return Err(Error::Domain(format!("|A|^2 = {a2:e} too small: gradient undefined")));
        }
        let n = self.dim();
        let mut total = 0.0;
        for k in 0..n {
            let d: f64 = (0..n).map(|i| self.lambda[i] * self.h(i, i, k)).sum();
            total += d * d;
        }
        Ok(total / a2)
    }
}

/// The three nonnegative terms of the decomposition
/// `|grad A|^2 - (1 + 2/n) |grad |A||^2 = E1 + E2 + E3`.
#[derive(Debug, Clone, Copy)]
pub struct SimonsTerms {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub e: f64,
}

pub fn e_terms(data: &SFFData) -> Result<SimonsTerms> {
    let n = data.dim();
    let nf = n as f64;
    let mut e1 = 0.0;
    let mut e2 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let v = data.h(i, j, k);
                e1 += v * v;
                let d = data.h(k, k, i) - data.h(j, j, i);
                e2 += d * d;
            }
        }
    }
    e2 *= 2.0 / nf;
    let mut e3_num = 0.0;
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = data.lambda[i] * data.h(j, j, k) - data.lambda[j] * data.h(i, i, k);
                e3_num += d * d;
            }
        }
    }
    let a2 = data.norm_sq();
    let e3 = if a2 >= 1e-14 {
        (1.0 + 2.0 / nf) * e3_num / a2
    } else if e3_num <= 1e-28 {
        0.0
    } else {
        return Err(Error::Domain(format!(
            "|A|^2 = {a2:e} vanishes with nonzero numerator {e3_num:e}"
        )));
    };
    Ok(SimonsTerms { e1, e2, e3, e: e1 + e2 + e3 })
}

/// Both sides of `|grad A|^2 = (1 + 2/n) |grad |A||^2 + E`, for comparison.
/// Exact for n = 2; for n >= 3 exact on rotation-structured data (see module
/// docs), while generic trace-free data only satisfies lhs <= rhs.
pub fn identity_check(data: &SFFData) -> Result<(f64, f64)> {
    let lhs = data.grad_full_sq();
    let grad = data.grad_norm_sq()?;
    let terms = e_terms(data)?;
    let rhs = (1.0 + 2.0 / data.dim() as f64) * grad + terms.e;
    Ok((lhs, rhs))
}

/// Random trace-free symmetric data: a fully symmetric tensor projected onto
/// `sum_i h_iik = 0` by subtracting `delta_ij w_k + delta_jk w_i + delta_ki w_j`
/// with `w = trace / (n + 2)`.
pub fn random_admissible(n: usize, rng: &mut impl Rng) -> Result<SFFData> {
    assert!(n >= 2);
    let mut lambda: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    // re-center; keep |A| bounded away from zero so E3 stays defined
    loop {
        let mean: f64 = lambda.iter().sum::<f64>() / n as f64;
        for l in lambda.iter_mut() {
            *l -= mean;
        }
        if lambda.iter().map(|l| l * l).sum::<f64>() > 1e-3 {
            break;
        }
        lambda = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    }
    let mut h = vec![0.0; n * n * n];
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let v = rng.gen_range(-1.0..1.0);
                for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)]
                {
                    h[(a * n + b) * n + c] = v;
                }
            }
        }
    }
    let traces: Vec<f64> = (0..n)
        .map(|k| (0..n).map(|i| h[(i * n + i) * n + k]).sum::<f64>() / (n as f64 + 2.0))
        .collect();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut v = h[(i * n + j) * n + k];
                if i == j {
                    v -= traces[k];
                }
                if j == k {
                    v -= traces[i];
                }
                if k == i {
                    v -= traces[j];
                }
                h[(i * n + j) * n + k] = v;
            }
        }
    }
    SFFData::new(lambda, h)
}

/// Random admissible data with the rotation structure of a minimal rotation
/// hypersurface frame: eigenvalues `(t, ..., t, -(n-1) t)`, double-index
/// derivative components supported on the distinguished direction and
/// proportional to the eigenvalues (`h_iin = kappa lambda_i`), all-distinct
/// components free. On this class the decomposition identity is exact.
pub fn random_rotation_admissible(n: usize, rng: &mut impl Rng) -> Result<SFFData> {
    assert!(n >= 3);
    let t: f64 = rng.gen_range(0.2..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let mut lambda = vec![t; n];
    lambda[n - 1] = -((n - 1) as f64) * t;
    let kappa: f64 = rng.gen_range(-1.0..1.0);
    let mut h = vec![0.0; n * n * n];
    let last = n - 1;
    for i in 0..n {
        let v = kappa * lambda[i];
        for (a, b, c) in [(i, i, last), (i, last, i), (last, i, i)] {
            h[(a * n + b) * n + c] = v;
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let v = rng.gen_range(-1.0..1.0);
                for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)]
                {
                    h[(a * n + b) * n + c] = v;
                }
            }
        }
    }
    SFFData::new(lambda, h)
}

/// Block-diagonal first fundamental form of a rotation hypersurface:
/// angular block `alpha_ij x1^2`, arclength entry 1, mixed entries 0.
#[derive(Debug, Clone)]
pub struct InducedMetric {
    pub x1_sq: f64,
    /// (n-1) x (n-1), row-major.
    pub alpha: Vec<f64>,
    pub n: usize,
    alpha_det: f64,
}

impl InducedMetric {
    /// Full n x n metric, row-major; angular block first, arclength last.
    pub fn matrix(&self) -> Vec<f64> {
        let n = self.n;
        let mut g = vec![0.0; n * n];
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                g[i * n + j] = self.alpha[i * (n - 1) + j] * self.x1_sq;
            }
        }
        g[n * n - 1] = 1.0;
        g
    }

    /// `det(alpha) x1^{2(n-1)}`.
    pub fn det(&self) -> f64 {
        self.alpha_det * self.x1_sq.powi(self.n as i32 - 1)
    }
}

pub fn induced_metric(sf: &SpaceForm, x1: f64, alpha: &[f64]) -> Result<InducedMetric> {
    let n = sf.n() as usize;
    let m = n - 1;
    if alpha.len() != m * m {
        return Err(Error::Domain(format!(
            "angular block has {} entries, expected {}",
            alpha.len(),
            m * m
        )));
    }
    if !(x1 > 0.0) {
        return Err(Error::Domain(format!("need x1 > 0, got {x1}")));
    }
    for i in 0..m {
        for j in 0..m {
            if (alpha[i * m + j] - alpha[j * m + i]).abs() > 1e-12 {
                return Err(Error::Domain("angular block not symmetric".into()));
            }
        }
    }
    // Cholesky: positive-definiteness check and determinant in one pass
    let mut l = vec![0.0; m * m];
    let mut det = 1.0;
    for i in 0..m {
        for j in 0..=i {
            let mut s = alpha[i * m + j];
            for k in 0..j {
                s -= l[i * m + k] * l[j * m + k];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::Domain("angular block not positive-definite".into()));
                }
                l[i * m + i] = s.sqrt();
                det *= s;
            } else {
                l[i * m + j] = s / l[j * m + j];
            }
        }
    }
    Ok(InducedMetric { x1_sq: x1 * x1, alpha: alpha.to_vec(), n, alpha_det: det })
}
