//! eNP and rotation operators on closed surfaces, in dense form or, for
//! surfaces of revolution about `z`, as azimuthal Fourier blocks.
//!
//! On a surface of revolution the rotation `R = Rz(2π/P)` maps the node
//! `(ring j, azimuth u)` to `(j, u+1)` and the kernels are covariant:
//! `A[(i,v),(j,u)] = R^v S_ij(u-v) R^{-v}` with `S` the seed rows. In the
//! local frame `ψ̃(j,u) = R^{-u} ψ(j,u)` the operator is block circulant in
//! the azimuth, so a length-`P` DFT splits it into `P` blocks
//!
//! ```text
//! B̂_κ[(a,i),(b,j)] = Σ_u Σ_c S[(a,i),(c,j,u)] (R^u)_cb e^{2πiκu/P},
//! ```
//!
//! each of size `3·n_theta`. The change of basis is unitary in the weighted
//! inner product, so eigenvalues and weighted singular values of the full
//! operator are the unions over the blocks.

use enp_core::dense::BlockOperator;
use enp_core::elastic::LameParams;
use enp_core::surface::{
    surface_quadrature, AxisymmetricRows, ClosedSurface, RotationRule, SpectralAssembler,
    SurfaceKernel, SurfaceQuadrature,
};
use faer::Mat;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{LabError, LabResult};
use crate::linalg;

/// `K` or `T` on a surface of revolution as `P` weighted Fourier blocks.
#[derive(Clone, Debug)]
pub struct FourierBlocks {
    pub n_theta: usize,
    /// One `3·n_theta` square block per azimuthal frequency, already
    /// conjugated by the ring weights.
    pub blocks: Vec<Mat<Complex64>>,
}

impl FourierBlocks {
    pub fn from_rows(rows: &AxisymmetricRows) -> Self {
        let nt = rows.n_theta;
        let p = rows.n_phi;
        let m = nt * p;
        let dim = 3 * nt;
        let mut blocks = vec![Mat::<Complex64>::zeros(dim, dim); p];
        let rot: Vec<[[f64; 3]; 3]> = (0..p)
            .map(|u| {
                let (s, c) = (std::f64::consts::TAU * u as f64 / p as f64).sin_cos();
                [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
            })
            .collect();
        let fft = FftPlanner::<f64>::new().plan_fft_inverse(p);
        let mut seq = vec![Complex64::new(0.0, 0.0); p];
        for a in 0..3 {
            for i in 0..nt {
                let row = rows.rows.row(a * nt + i);
                for j in 0..nt {
                    for b in 0..3 {
                        for (u, s) in seq.iter_mut().enumerate() {
                            let mut acc = 0.0;
                            for c in 0..3 {
                                acc += row[c * m + j * p + u] * rot[u][c][b];
                            }
                            *s = Complex64::new(acc, 0.0);
                        }
                        // Unnormalized inverse DFT: Σ_u s_u e^{+2πiκu/P}.
                        fft.process(&mut seq);
                        let scale = (rows.ring_weights[i] / rows.ring_weights[j]).sqrt();
                        for (k, blk) in blocks.iter_mut().enumerate() {
                            blk[(a * nt + i, b * nt + j)] = seq[k] * scale;
                        }
                    }
                }
            }
        }
        Self { n_theta: nt, blocks }
    }

    /// Blockwise `α·self + β·other`.
    pub fn combine(&self, alpha: f64, other: &FourierBlocks, beta: f64) -> LabResult<Self> {
        if self.blocks.len() != other.blocks.len() || self.n_theta != other.n_theta {
            return Err(LabError::Numeric("Fourier block layouts differ".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| {
                Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * alpha + b[(i, j)] * beta)
            })
            .collect();
        Ok(Self {
            n_theta: self.n_theta,
            blocks,
        })
    }

    /// Apply a matrix function block by block.
    pub fn map<F: Fn(&Mat<Complex64>) -> Mat<Complex64>>(&self, f: F) -> Self {
        Self {
            n_theta: self.n_theta,
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.blocks.len() * 3 * self.n_theta
    }

    pub fn eigenvalues(&self) -> LabResult<Vec<Complex64>> {
        let mut all = Vec::with_capacity(self.dim());
        for b in &self.blocks {
            all.extend(linalg::eigenvalues_complex(b.as_ref())?);
        }
        enp_core::spectra::sort_by_real(&mut all);
        Ok(all)
    }

    pub fn singular_values(&self) -> LabResult<Vec<f64>> {
        let mut all = Vec::with_capacity(self.dim());
        for b in &self.blocks {
            all.extend(linalg::singular_values_complex(b.as_ref())?);
        }
        Ok(linalg::clean_descending(all))
    }
}

/// The pair `(K, T)` on one surface of revolution.
#[derive(Clone, Debug)]
pub struct AxisymmetricPair {
    pub quad: SurfaceQuadrature,
    pub k: FourierBlocks,
    pub t: FourierBlocks,
}

pub fn axisymmetric_pair(
    params: &LameParams,
    surface: &ClosedSurface,
    n: usize,
) -> LabResult<AxisymmetricPair> {
    let quad = surface_quadrature(surface, n)?;
    let asm = SpectralAssembler::new(surface, &quad, RotationRule::for_resolution(n))?;
    let k = FourierBlocks::from_rows(&asm.assemble_axisymmetric(&SurfaceKernel::Enp(*params))?);
    let t = FourierBlocks::from_rows(&asm.assemble_axisymmetric(&SurfaceKernel::Rotation)?);
    Ok(AxisymmetricPair { quad, k, t })
}

/// Dense `K` (or `T`) for any closed surface.
pub fn dense_operator(
    kernel: &SurfaceKernel,
    surface: &ClosedSurface,
    quad: &SurfaceQuadrature,
) -> LabResult<BlockOperator> {
    let asm = SpectralAssembler::new(surface, quad, RotationRule::for_resolution(quad.n))?;
    Ok(asm.assemble(kernel)?)
}

/// `A (A² - k₀²)` as a block operator with the same weights.
pub fn p3_apply(op: &BlockOperator, k0: f64) -> LabResult<BlockOperator> {
    let m = op.nodes();
    let a = linalg::to_faer(op.matrix());
    let p = linalg::p3_matrix(a.as_ref(), k0);
    let dense = enp_core::dense::DenseMatrix::from_fn(3 * m, 3 * m, |i, j| p[(i, j)]);
    Ok(BlockOperator::new(dense, op.weights().to_vec())?)
}
