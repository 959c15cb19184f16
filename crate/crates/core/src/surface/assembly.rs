//! Rotation-trick Nyström assembly on closed surfaces.
//!
//! For a target `x_m = x(s_m)` the parameter sphere is re-gridded with `s_m`
//! at the north pole: Gauss–Legendre in `θ' ∈ (0, π)` times an even
//! trapezoid rule in `φ'`. The `sin θ'` of the polar area element cancels one
//! order of the `|x - y|^{-2}` singularity, and the remaining `1/θ'` part is
//! odd under `φ' → φ' + π`, so it cancels exactly between node pairs. The
//! density is carried to the rotated nodes by the degree `< N` spherical
//! harmonic interpolant of the grid values, which the product grid
//! analyzes exactly. The target itself is never a quadrature node, so the
//! self term is zero.
//!
//! Row `m` of the assembled matrix is therefore
//!
//! ```text
//! A[(a,m),(b,l)] = Σ_h [Σ_k K_ab(x_m, y_k) w'_k J(z_k) Y_h(z_k)] · ω_l Y_h(s_l).
//! ```

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::dense::{BlockOperator, DenseMatrix};
use crate::elastic::{k1_eval, EnpCoefficients, LameParams};
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::{mat3_vec, sub3, Mat3, Vec3};

use super::harmonics::RealHarmonics;
use super::{ClosedSurface, SurfaceQuadrature};

/// Which boundary kernel to assemble.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SurfaceKernel {
    /// `∂_{ν_x} Γ(x - y)`.
    Enp(LameParams),
    /// `𝐊₁(x, y)`.
    Rotation,
}

enum Evaluator {
    Enp(EnpCoefficients),
    Rotation,
}

impl Evaluator {
    #[inline]
    fn eval(&self, d: Vec3, n: Vec3) -> Mat3 {
        match self {
            Evaluator::Enp(c) => c.eval(d, n),
            Evaluator::Rotation => k1_eval(d, n),
        }
    }
}

/// Resolution of the per-target rotated grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RotationRule {
    pub n_theta: usize,
    /// Must be even so that `φ'` and `φ' + π` are both nodes.
    pub n_phi: usize,
}

impl RotationRule {
    /// `⌈3N/2⌉` polar and twice as many azimuthal nodes.
    pub fn for_resolution(n: usize) -> Self {
        let n_theta = n + n.div_ceil(2);
        Self {
            n_theta,
            n_phi: 2 * n_theta,
        }
    }
}

/// Seed rows of an operator on an axisymmetric surface: the rows of the
/// targets with azimuthal index 0, one per polar ring. Every other row is a
/// rotated copy, so these rows determine the whole matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisymmetricRows {
    pub n_theta: usize,
    pub n_phi: usize,
    /// `3·n_theta × 3M`; row `a·n_theta + i`, column `b·M + l`.
    pub rows: DenseMatrix,
    /// Area weight of each polar ring.
    pub ring_weights: Vec<f64>,
}

/// Rotation-trick assembler for one surface and quadrature.
pub struct SpectralAssembler<'a> {
    surface: &'a ClosedSurface,
    quad: &'a SurfaceQuadrature,
    harmonics: RealHarmonics,
    rule: RotationRule,
    /// `ω_l Y_h(s_l)`, `h` major.
    analysis: Vec<f64>,
    /// Rotated-grid template: unit vectors about the north pole and weights.
    template: Vec<(Vec3, f64)>,
}

impl<'a> SpectralAssembler<'a> {
    pub fn new(
        surface: &'a ClosedSurface,
        quad: &'a SurfaceQuadrature,
        rule: RotationRule,
    ) -> Result<Self> {
        if rule.n_phi % 2 != 0 || rule.n_theta == 0 {
            return Err(Error::Parameter(
                "rotated grid needs an even, nonzero azimuthal count".into(),
            ));
        }
        let harmonics = RealHarmonics::new(quad.n);
        let nh = harmonics.count();
        let m = quad.len();
        let mut analysis = vec![0.0; nh * m];
        let mut y = vec![0.0; nh];
        for l in 0..m {
            harmonics.eval(quad.params[l], &mut y);
            for h in 0..nh {
                analysis[h * m + l] = quad.sphere_weights[l] * y[h];
            }
        }
        let (x, w) = gauss_legendre(rule.n_theta);
        let dphi = 2.0 * PI / rule.n_phi as f64;
        let mut template = Vec::with_capacity(rule.n_theta * rule.n_phi);
        for (xa, wa) in x.iter().zip(&w) {
            let th = 0.5 * PI * (1.0 + xa);
            let (st, ct) = libm::sincos(th);
            let wt = 0.5 * PI * wa * st * dphi;
            for k in 0..rule.n_phi {
                let (sp, cp) = libm::sincos(k as f64 * dphi);
                template.push(([st * cp, st * sp, ct], wt));
            }
        }
        Ok(Self {
            surface,
            quad,
            harmonics,
            rule,
            analysis,
            template,
        })
    }

    pub fn quadrature(&self) -> &SurfaceQuadrature {
        self.quad
    }

    /// Rotation taking the north pole to `s`: `Rz(φ) Ry(θ)`.
    fn pole_rotation(s: Vec3) -> Mat3 {
        let ct = s[2].clamp(-1.0, 1.0);
        let st = libm::hypot(s[0], s[1]);
        let (cp, sp) = if st > 0.0 { (s[0] / st, s[1] / st) } else { (1.0, 0.0) };
        [
            [cp * ct, -sp, cp * st],
            [sp * ct, cp, sp * st],
            [-st, 0.0, ct],
        ]
    }

    /// The harmonic moments `V[ab][h]` (entry `3a + b`) of the kernel about
    /// target `m`. Row `(a, m)` of the operator is `Σ_h V[ab][h]·analysis[h]`.
    pub fn kernel_moments(&self, kernel: &SurfaceKernel, m: usize) -> Vec<[f64; 9]> {
        self.moments(&Self::evaluator(kernel), m)
    }

    /// `ω_l Y_h(s_l)` as a row-major `harmonics × M` table.
    pub fn analysis_table(&self) -> &[f64] {
        &self.analysis
    }

    pub fn harmonic_count(&self) -> usize {
        self.harmonics.count()
    }

    fn moments(&self, eval: &Evaluator, m: usize) -> Vec<[f64; 9]> {
        let nh = self.harmonics.count();
        let s_m = self.quad.params[m];
        let x_m = self.quad.points[m];
        let n_m = self.quad.normals[m];
        let rot = Self::pole_rotation(s_m);
        let mut v = vec![[0.0; 9]; nh];
        let mut y = vec![0.0; nh];
        for &(t, wt) in &self.template {
            let z = mat3_vec(&rot, t);
            let k = eval.eval(sub3(x_m, self.surface.point(z)), n_m);
            let w = wt * self.surface.area_factor(z);
            self.harmonics.eval(z, &mut y);
            let kw = [
                k[0][0] * w,
                k[0][1] * w,
                k[0][2] * w,
                k[1][0] * w,
                k[1][1] * w,
                k[1][2] * w,
                k[2][0] * w,
                k[2][1] * w,
                k[2][2] * w,
            ];
            for (vh, &yh) in v.iter_mut().zip(&y) {
                for c in 0..9 {
                    vh[c] += kw[c] * yh;
                }
            }
        }
        v
    }

    /// Write the three rows of target `m` into `out` (rows `row(a)` for
    /// component `a`), each of length `3M`.
    fn rows_into(&self, eval: &Evaluator, m: usize, out: [&mut [f64]; 3]) {
        let v = self.moments(eval, m);
        let big_m = self.quad.len();
        let [r0, r1, r2] = out;
        let rows = [r0, r1, r2];
        for r in rows.into_iter().enumerate() {
            let (a, row) = r;
            row.fill(0.0);
            for b in 0..3 {
                let dst = &mut row[b * big_m..(b + 1) * big_m];
                for (h, vh) in v.iter().enumerate() {
                    let coef = vh[3 * a + b];
                    let src = &self.analysis[h * big_m..(h + 1) * big_m];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += coef * s;
                    }
                }
            }
        }
    }

    fn evaluator(kernel: &SurfaceKernel) -> Evaluator {
        match kernel {
            SurfaceKernel::Enp(p) => Evaluator::Enp(EnpCoefficients::new(p)),
            SurfaceKernel::Rotation => Evaluator::Rotation,
        }
    }

    /// Full `3M × 3M` block operator.
    pub fn assemble(&self, kernel: &SurfaceKernel) -> Result<BlockOperator> {
        let eval = Self::evaluator(kernel);
        let m = self.quad.len();
        let mut a = DenseMatrix::zeros(3 * m, 3 * m);
        let mut buf = vec![0.0; 9 * m];
        for t in 0..m {
            {
                let (b0, rest) = buf.split_at_mut(3 * m);
                let (b1, b2) = rest.split_at_mut(3 * m);
                self.rows_into(&eval, t, [b0, b1, b2]);
            }
            for c in 0..3 {
                a.row_mut(c * m + t)
                    .copy_from_slice(&buf[c * 3 * m..(c + 1) * 3 * m]);
            }
        }
        if matches!(kernel, SurfaceKernel::Rotation) {
            enforce_block_antisymmetry(&mut a, m);
        }
        a.check_finite("surface operator")?;
        BlockOperator::new(a, self.quad.weights.clone())
    }

    /// Seed rows for an axisymmetric surface.
    pub fn assemble_axisymmetric(&self, kernel: &SurfaceKernel) -> Result<AxisymmetricRows> {
        if !self.surface.is_axisymmetric() {
            return Err(Error::Domain(
                "seed-row assembly needs a surface of revolution about z".into(),
            ));
        }
        let eval = Self::evaluator(kernel);
        let n_theta = self.quad.n_theta();
        let n_phi = self.quad.n_phi();
        let m = self.quad.len();
        let mut rows = DenseMatrix::zeros(3 * n_theta, 3 * m);
        let mut buf = vec![0.0; 9 * m];
        for i in 0..n_theta {
            {
                let (b0, rest) = buf.split_at_mut(3 * m);
                let (b1, b2) = rest.split_at_mut(3 * m);
                self.rows_into(&eval, i * n_phi, [b0, b1, b2]);
            }
            for c in 0..3 {
                rows.row_mut(c * n_theta + i)
                    .copy_from_slice(&buf[c * 3 * m..(c + 1) * 3 * m]);
            }
        }
        rows.check_finite("seed rows")?;
        let ring_weights = (0..n_theta).map(|i| self.quad.weights[i * n_phi]).collect();
        Ok(AxisymmetricRows {
            n_theta,
            n_phi,
            rows,
            ring_weights,
        })
    }

    pub fn rule(&self) -> RotationRule {
        self.rule
    }
}

/// Copy the upper blocks onto the lower ones with the sign flipped and zero
/// the diagonal blocks, so antisymmetry holds bit for bit.
pub fn enforce_block_antisymmetry(a: &mut DenseMatrix, m: usize) {
    for (p, q) in [(0, 1), (0, 2), (1, 2)] {
        for i in 0..m {
            for j in 0..m {
                let v = a.get(p * m + i, q * m + j);
                a.set(q * m + i, p * m + j, -v);
            }
        }
    }
    for p in 0..3 {
        for i in 0..m {
            for j in 0..m {
                a.set(p * m + i, p * m + j, 0.0);
            }
        }
    }
}

/// Dense `𝐊` with the default rotated grid.
pub fn assemble_k(
    params: &LameParams,
    surface: &ClosedSurface,
    quad: &SurfaceQuadrature,
) -> Result<BlockOperator> {
    SpectralAssembler::new(surface, quad, RotationRule::for_resolution(quad.n))?
        .assemble(&SurfaceKernel::Enp(*params))
}

/// Dense `𝐓` with the default rotated grid.
pub fn assemble_t(surface: &ClosedSurface, quad: &SurfaceQuadrature) -> Result<BlockOperator> {
    SpectralAssembler::new(surface, quad, RotationRule::for_resolution(quad.n))?
        .assemble(&SurfaceKernel::Rotation)
}
