//! Closed surfaces, their product quadratures and the Nyström assembly of
//! `𝐊` and `𝐓`.
//!
//! A closed surface is an ellipsoid `x = Q·diag(a, b, c)·s` over the unit
//! parameter sphere `s ∈ S²`, with `Q` a rotation. Everything is evaluated
//! from `s` directly, so nothing special happens at the coordinate poles.

mod assembly;
mod harmonics;

pub use assembly::{
    assemble_k, assemble_t, enforce_block_antisymmetry, AxisymmetricRows, RotationRule, SpectralAssembler, SurfaceKernel,
};
pub use harmonics::RealHarmonics;

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::{dot3, mat3_vec, norm3, Mat3, Vec3};

const IDENTITY: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Rotated ellipsoid.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedSurface {
    axes: [f64; 3],
    orientation: Mat3,
}

impl ClosedSurface {
    pub fn sphere(radius: f64) -> Result<Self> {
        Self::ellipsoid(radius, radius, radius)
    }

    pub fn ellipsoid(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && c > 0.0) || !(a.is_finite() && b.is_finite() && c.is_finite())
        {
            return Err(Error::Parameter(alloc::format!(
                "ellipsoid semi-axes must be positive, got ({a}, {b}, {c})"
            )));
        }
        Ok(Self {
            axes: [a, b, c],
            orientation: IDENTITY,
        })
    }

    /// Same surface rigidly rotated by `q` (must be a proper rotation).
    pub fn rotated(&self, q: Mat3) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                let qq = dot3(q[i], q[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                if (qq - want).abs() > 1e-12 {
                    return Err(Error::Parameter("orientation is not orthonormal".into()));
                }
            }
        }
        let det = dot3(q[0], crate::cross3(q[1], q[2]));
        if det < 0.0 {
            return Err(Error::Parameter("orientation must preserve handedness".into()));
        }
        let mut o = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                o[i][j] = (0..3).map(|k| q[i][k] * self.orientation[k][j]).sum();
            }
        }
        Ok(Self {
            axes: self.axes,
            orientation: o,
        })
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        let [a, b, c] = self.axes;
        let mut out = Self::ellipsoid(s * a, s * b, s * c)?;
        out.orientation = self.orientation;
        Ok(out)
    }

    pub fn axes(&self) -> [f64; 3] {
        self.axes
    }

    pub fn orientation(&self) -> &Mat3 {
        &self.orientation
    }

    /// Rotationally symmetric about the `z` axis of the parameter sphere.
    pub fn is_axisymmetric(&self) -> bool {
        self.axes[0] == self.axes[1] && self.orientation == IDENTITY
    }

    pub fn point(&self, s: Vec3) -> Vec3 {
        let [a, b, c] = self.axes;
        mat3_vec(&self.orientation, [a * s[0], b * s[1], c * s[2]])
    }

    /// Outward unit normal at the image of `s`.
    pub fn normal(&self, s: Vec3) -> Vec3 {
        let [a, b, c] = self.axes;
        let g = [s[0] / a, s[1] / b, s[2] / c];
        let len = norm3(g);
        mat3_vec(&self.orientation, [g[0] / len, g[1] / len, g[2] / len])
    }

    /// Area element relative to the parameter sphere: `abc·|D⁻¹s|`.
    pub fn area_factor(&self, s: Vec3) -> f64 {
        let [a, b, c] = self.axes;
        a * b * c * norm3([s[0] / a, s[1] / b, s[2] / c])
    }
}

/// Product quadrature: `N` Gauss–Legendre nodes in `cos θ` times `2N`
/// trapezoid nodes in `φ`. Node `l = i·2N + k` has polar index `i` and
/// azimuthal index `k`, `φ_k = 2πk/2N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceQuadrature {
    pub n: usize,
    /// Parameter-sphere nodes.
    pub params: Vec<Vec3>,
    /// Parameter-sphere weights (sum to 4π).
    pub sphere_weights: Vec<f64>,
    pub points: Vec<Vec3>,
    pub normals: Vec<Vec3>,
    /// Area weights.
    pub weights: Vec<f64>,
}

/// Smallest accepted resolution.
pub const MIN_RESOLUTION: usize = 8;

pub fn surface_quadrature(surface: &ClosedSurface, n: usize) -> Result<SurfaceQuadrature> {
    if n < MIN_RESOLUTION {
        return Err(Error::Resolution {
            n,
            min: MIN_RESOLUTION,
        });
    }
    let (x, w) = gauss_legendre(n);
    let n_phi = 2 * n;
    let dphi = 2.0 * PI / n_phi as f64;
    let m = n * n_phi;
    let mut q = SurfaceQuadrature {
        n,
        params: Vec::with_capacity(m),
        sphere_weights: Vec::with_capacity(m),
        points: Vec::with_capacity(m),
        normals: Vec::with_capacity(m),
        weights: Vec::with_capacity(m),
    };
    for i in 0..n {
        let ct = x[i];
        let st = libm::sqrt((1.0 - ct * ct).max(0.0));
        for k in 0..n_phi {
            let (sp, cp) = libm::sincos(k as f64 * dphi);
            let s = [st * cp, st * sp, ct];
            let ws = w[i] * dphi;
            q.params.push(s);
            q.sphere_weights.push(ws);
            q.points.push(surface.point(s));
            q.normals.push(surface.normal(s));
            q.weights.push(ws * surface.area_factor(s));
        }
    }
    Ok(q)
}

impl SurfaceQuadrature {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn n_theta(&self) -> usize {
        self.n
    }

    pub fn n_phi(&self) -> usize {
        2 * self.n
    }

    pub fn area(&self) -> f64 {
        self.weights.iter().sum()
    }
}
