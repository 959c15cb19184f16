//! Square 2-D FFTs, the flat Fourier-multiplier oracle and the FFT
//! application of translation-invariant Nyström stencils.
//!
//! Grid functions are row-major `N×N` arrays with index `i·N + j`, `i`
//! running along `u1`.

use std::f64::consts::TAU;
use std::sync::Arc;

use enp_core::riesz::{Axis, PlanarGrid, Stencil};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{LabError, LabResult};

/// Unnormalized forward/inverse 2-D FFT on an `n×n` array.
pub struct Fft2 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    column: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl Fft2 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let len = fwd
            .get_inplace_scratch_len()
            .max(inv.get_inplace_scratch_len());
        Self {
            n,
            fwd,
            inv,
            column: vec![Complex64::default(); n],
            scratch: vec![Complex64::default(); len],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn run(&mut self, data: &mut [Complex64], forward: bool) {
        let n = self.n;
        assert_eq!(data.len(), n * n, "FFT buffer has the wrong size");
        let plan = if forward { &self.fwd } else { &self.inv };
        plan.process_with_scratch(data, &mut self.scratch);
        for j in 0..n {
            for i in 0..n {
                self.column[i] = data[i * n + j];
            }
            plan.process_with_scratch(&mut self.column, &mut self.scratch);
            for i in 0..n {
                data[i * n + j] = self.column[i];
            }
        }
    }

    /// `X[k] = Σ_x x[x] e^{-2πi k·x / n}`.
    pub fn forward(&mut self, data: &mut [Complex64]) {
        self.run(data, true);
    }

    /// `x[x] = Σ_k X[k] e^{+2πi k·x / n}` (no `1/n²`).
    pub fn inverse(&mut self, data: &mut [Complex64]) {
        self.run(data, false);
    }
}

/// Angular frequencies of an `n`-point grid with spacing `h`, numpy
/// `fftfreq` order (the Nyquist bin is negative).
pub fn angular_frequencies(n: usize, h: f64) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let k = if k < n.div_ceil(2) { k as f64 } else { k as f64 - n as f64 };
            TAU * k / (n as f64 * h)
        })
        .collect()
}

/// Apply the flat Riesz multiplier `-iξ_j/|ξ|` (zero at `ξ = 0`) through the
/// DFT of `f` zero-padded to `(pad·N)²` and truncated back to the grid; the
/// real part is returned. `pad = 1` gives the exact periodic multiplier.
pub fn flat_multiplier_apply(
    grid: &PlanarGrid,
    f: &[f64],
    axis: Axis,
    pad: usize,
) -> LabResult<Vec<f64>> {
    let n = grid.n_per_side();
    if f.len() != n * n {
        return Err(LabError::Numeric(format!(
            "grid function has {} values, expected {}",
            f.len(),
            n * n
        )));
    }
    if pad == 0 {
        return Err(LabError::Config("padding factor must be at least 1".into()));
    }
    let big = n * pad;
    let mut buf = vec![Complex64::default(); big * big];
    for i in 0..n {
        for j in 0..n {
            buf[i * big + j] = Complex64::new(f[i * n + j], 0.0);
        }
    }
    let mut fft = Fft2::new(big);
    fft.forward(&mut buf);
    let xi = angular_frequencies(big, grid.spacing());
    for a in 0..big {
        for b in 0..big {
            let (x1, x2) = (xi[a], xi[b]);
            let r = x1.hypot(x2);
            let s = if r == 0.0 {
                0.0
            } else {
                match axis {
                    Axis::U1 => x1 / r,
                    Axis::U2 => x2 / r,
                }
            };
            buf[a * big + b] *= Complex64::new(0.0, -s);
        }
    }
    fft.inverse(&mut buf);
    let scale = 1.0 / (big * big) as f64;
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = buf[i * big + j].re * scale;
        }
    }
    Ok(out)
}

/// `(A f)(p) = Σ_q s(p - q) f(q)` for a translation-invariant stencil, by a
/// zero-padded FFT convolution. Equal to the dense Nyström apply up to
/// roundoff.
pub fn stencil_apply(stencil: &Stencil, f: &[f64]) -> LabResult<Vec<f64>> {
    let n = stencil.n_per_side();
    if f.len() != n * n {
        return Err(LabError::Numeric(format!(
            "grid function has {} values, expected {}",
            f.len(),
            n * n
        )));
    }
    let big = (3 * n - 2).next_power_of_two();
    let mut ks = vec![Complex64::default(); big * big];
    let mut fs = vec![Complex64::default(); big * big];
    // Offset o = p - q in [-(n-1), n-1]² sits at index o mod big.
    let wrap = |o: i64| o.rem_euclid(big as i64) as usize;
    let m = n as i64 - 1;
    for a in -m..=m {
        for b in -m..=m {
            ks[wrap(a) * big + wrap(b)] = Complex64::new(stencil.at(a, b), 0.0);
        }
    }
    for i in 0..n {
        for j in 0..n {
            fs[i * big + j] = Complex64::new(f[i * n + j], 0.0);
        }
    }
    let mut fft = Fft2::new(big);
    fft.forward(&mut ks);
    fft.forward(&mut fs);
    for (k, v) in ks.iter_mut().zip(&fs) {
        *k *= v;
    }
    fft.inverse(&mut ks);
    let scale = 1.0 / (big * big) as f64;
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = ks[i * big + j].re * scale;
        }
    }
    Ok(out)
}

/// Relative L² error `‖a - b‖/‖b‖` over the nodes selected by `mask`
/// (all nodes when `None`).
pub fn relative_l2(a: &[f64], b: &[f64], mask: Option<&[usize]>) -> f64 {
    let (num, den) = match mask {
        Some(idx) => idx.iter().fold((0.0, 0.0), |(n, d), &p| {
            (n + (a[p] - b[p]).powi(2), d + b[p] * b[p])
        }),
        None => a
            .iter()
            .zip(b)
            .fold((0.0, 0.0), |(n, d), (x, y)| (n + (x - y).powi(2), d + y * y)),
    };
    if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}
