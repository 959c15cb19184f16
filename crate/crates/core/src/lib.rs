//! Pointwise kernels, geometry and Nyström assembly for surface Riesz
//! transforms and the elastic Neumann–Poincaré (eNP) operator.
//!
//! This crate is `no_std` (it needs `alloc`). Everything that wants an FFT,
//! a dense eigensolver, files or a command line lives in `enp-lab`.
//!
//! Layout:
//! - [`geometry`]: charts, induced metrics, metric extension, cutoffs, `m_ij`.
//! - [`elastic`]: Lamé parameters, the Kelvin matrix and the eNP kernel.
//! - [`riesz`]: the planar metric kernels, their symbols and the Nyström rules.
//! - [`surface`]: closed surfaces, their quadratures and the rotation-trick
//!   assembly of `K` and `T`.
//! - [`spectra`]: cluster and decay reports, `p3`, multiset matching.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod dense;
pub mod elastic;
pub mod error;
pub mod geometry;
pub mod quadrature;
pub mod riesz;
pub mod spectra;
pub mod surface;

pub use error::{Error, Result};

/// Fixed-size vector in ℝ³.
pub type Vec3 = [f64; 3];
/// Row-major 3×3 matrix.
pub type Mat3 = [[f64; 3]; 3];

pub(crate) fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross3(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm3(a: Vec3) -> f64 {
    libm::sqrt(dot3(a, a))
}

pub(crate) fn sub3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn mat3_vec(m: &Mat3, v: Vec3) -> Vec3 {
    [dot3(m[0], v), dot3(m[1], v), dot3(m[2], v)]
}
