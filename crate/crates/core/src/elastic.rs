//! Lamé parameters, the Kelvin matrix and the pointwise eNP kernels.
//!
//! With `d = x - y`, `r = |d|` and `n = n_x`, differentiating the Kelvin
//! matrix by hand gives
//!
//! ```text
//! ∂_k Γ_ib = a δ_ib d_k / r³ - b (δ_ik d_b + δ_bk d_i) / r³ + 3b d_i d_b d_k / r⁵,
//! a = α₁/4π,  b = α₂/4π,
//! ```
//!
//! and the traction `λ (∇·Γe_b) n + μ (∇(Γe_b) + ∇(Γe_b)ᵀ) n` collapses to
//!
//! ```text
//! K_ib = k₀/(2π) · (n_b d_i - n_i d_b + δ_ib n·d) / r³ + 6μb (n·d) d_i d_b / r⁵.
//! ```
//!
//! The antisymmetric part is `-k₀ 𝐊₁`, so with these sign conventions the
//! compact combination is `𝐊 + k₀𝐓`.

use alloc::format;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::{dot3, sub3, Mat3, Vec3};

/// Largest accepted `λ/μ`; beyond it `k₀` is so small that the three
/// clusters merge.
pub const MAX_LAMBDA_OVER_MU: f64 = 1e6;

/// Lamé parameters satisfying strong convexity `μ > 0`, `3λ + 2μ > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LameParams {
    lambda: f64,
    mu: f64,
}

impl LameParams {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !(lambda.is_finite() && mu.is_finite()) {
            return Err(Error::Parameter("Lamé parameters must be finite".into()));
        }
        if !(mu > 0.0 && 3.0 * lambda + 2.0 * mu > 0.0) {
            return Err(Error::Parameter(format!(
                "strong convexity violated: (λ, μ) = ({lambda}, {mu})"
            )));
        }
        if lambda / mu > MAX_LAMBDA_OVER_MU {
            return Err(Error::Parameter(format!(
                "nearly incompressible: λ/μ = {} exceeds {MAX_LAMBDA_OVER_MU}",
                lambda / mu
            )));
        }
        Ok(Self { lambda, mu })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn constants(&self) -> ElasticConstants {
        constants(self)
    }
}

/// `α₁`, `α₂` of the Kelvin matrix and the accumulation value `k₀`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElasticConstants {
    pub alpha1: f64,
    pub alpha2: f64,
    pub k0: f64,
}

pub fn constants(params: &LameParams) -> ElasticConstants {
    let (l, m) = (params.lambda, params.mu);
    ElasticConstants {
        alpha1: 0.5 * (1.0 / m + 1.0 / (2.0 * m + l)),
        alpha2: 0.5 * (1.0 / m - 1.0 / (2.0 * m + l)),
        k0: m / (2.0 * (2.0 * m + l)),
    }
}

fn nonzero(d: Vec3) -> Result<f64> {
    let r2 = dot3(d, d);
    if r2 == 0.0 || !r2.is_finite() {
        return Err(Error::Singular("coincident or non-finite points"));
    }
    Ok(r2)
}

/// Kelvin matrix `Γ(x)`.
pub fn kelvin(params: &LameParams, x: Vec3) -> Result<Mat3> {
    let r2 = nonzero(x)?;
    let r = libm::sqrt(r2);
    let c = params.constants();
    let (a, b) = (c.alpha1 / (4.0 * PI), c.alpha2 / (4.0 * PI));
    let mut g = [[0.0; 3]; 3];
    // Upper triangle, mirrored, so Γ is bitwise symmetric.
    for i in 0..3 {
        for j in i..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            g[i][j] = -a * delta / r - b * x[i] * x[j] / (r2 * r);
            g[j][i] = g[i][j];
        }
    }
    Ok(g)
}

/// `∂_k Γ_ij(x)` indexed as `[k][i][j]`.
pub fn kelvin_gradient(params: &LameParams, x: Vec3) -> Result<[Mat3; 3]> {
    let r2 = nonzero(x)?;
    let r = libm::sqrt(r2);
    let r3 = r2 * r;
    let r5 = r3 * r2;
    let c = params.constants();
    let (a, b) = (c.alpha1 / (4.0 * PI), c.alpha2 / (4.0 * PI));
    let delta = |p: usize, q: usize| if p == q { 1.0 } else { 0.0 };
    let mut out = [[[0.0; 3]; 3]; 3];
    for (k, dk) in out.iter_mut().enumerate() {
        for i in 0..3 {
            for j in 0..3 {
                dk[i][j] = a * delta(i, j) * x[k] / r3
                    - b * (delta(i, k) * x[j] + delta(j, k) * x[i]) / r3
                    + 3.0 * b * x[i] * x[j] * x[k] / r5;
            }
        }
    }
    Ok(out)
}

/// Precomputed coefficients of the collapsed eNP kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct EnpCoefficients {
    /// `k₀/2π`.
    rot: f64,
    /// `6μ α₂/4π`.
    sym: f64,
}

impl EnpCoefficients {
    pub(crate) fn new(params: &LameParams) -> Self {
        let c = params.constants();
        Self {
            rot: c.k0 / (2.0 * PI),
            sym: 6.0 * params.mu * c.alpha2 / (4.0 * PI),
        }
    }

    /// Kernel for `d = x - y ≠ 0`.
    #[inline]
    pub(crate) fn eval(&self, d: Vec3, n: Vec3) -> Mat3 {
        let r2 = dot3(d, d);
        let r = libm::sqrt(r2);
        let inv3 = 1.0 / (r2 * r);
        let nd = dot3(n, d);
        let rot = self.rot * inv3;
        let sym = self.sym * nd * inv3 / r2;
        let mut k = [[0.0; 3]; 3];
        for i in 0..3 {
            for b in 0..3 {
                k[i][b] = rot * (n[b] * d[i] - n[i] * d[b]) + sym * d[i] * d[b];
            }
            k[i][i] += rot * nd;
        }
        k
    }
}

/// eNP kernel `∂_{ν_x} Γ(x - y)`: column `b` is the traction of `Γ(x - y) e_b`
/// with respect to `x`, for the unit normal `n_x`.
pub fn enp_kernel(params: &LameParams, x: Vec3, y: Vec3, n_x: Vec3) -> Result<Mat3> {
    let d = sub3(x, y);
    nonzero(d)?;
    check_unit(n_x)?;
    Ok(EnpCoefficients::new(params).eval(d, n_x))
}

/// Rotation kernel `𝐊₁(x, y) = (n_x (x-y)ᵀ - (x-y) n_xᵀ) / (2π |x-y|³)`.
pub fn k1_kernel(x: Vec3, y: Vec3, n_x: Vec3) -> Result<Mat3> {
    let d = sub3(x, y);
    nonzero(d)?;
    check_unit(n_x)?;
    Ok(k1_eval(d, n_x))
}

#[inline]
pub(crate) fn k1_eval(d: Vec3, n: Vec3) -> Mat3 {
    let r2 = dot3(d, d);
    let c = 1.0 / (2.0 * PI * r2 * libm::sqrt(r2));
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = c * (n[i] * d[j] - d[i] * n[j]);
        }
    }
    k
}

fn check_unit(n: Vec3) -> Result<()> {
    if (dot3(n, n) - 1.0).abs() > 1e-10 {
        return Err(Error::Domain("normal must have unit length".into()));
    }
    Ok(())
}
