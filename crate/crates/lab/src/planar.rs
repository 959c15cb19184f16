//! Windowed planar operators for the compactness proxies.
//!
//! `R_j^g` is discretized spectrally on the periodic grid: row `p` applies
//! the frozen symbol `σ_j(G(u_p), ξ)` exactly, so
//! `A_j[p, q] = k_j(G_p; p - q)` with `k_j(G; ·)` the inverse DFT of
//! `σ_j(G, ·)`. Symbols are zeroed on both Nyquist lines, which keeps every
//! kernel real and makes the flat operators exact projections that compose
//! like their symbols.
//!
//! Products are only needed on the window `W`. Splitting
//! `k_j(G_r; ·) = k_j(I; ·) + Δ_j(r; ·)`, where `Δ_j` vanishes off the
//! support `S` of `G - I`, gives
//!
//! ```text
//! (A_i A_j)[p, q] = IDFT(σ_i(G_p) σ_j(I))(p - q) + Σ_{r ∈ S} k_i(G_p; p - r) Δ_j(r; r - q),
//! ```
//!
//! one FFT per window row plus a `W×S` by `S×W` product.

use enp_core::geometry::{
    metric_from_chart, mij_coefficients, BuiltinChart, BuiltinMetric, CutoffPair, MetricField,
    MijCoefficients, Sym2,
};
use enp_core::riesz::PlanarGrid;
use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, MatRef, Par};
use num_complex::Complex64;

use crate::error::{LabError, LabResult};
use crate::fourier::{angular_frequencies, Fft2};

/// Refuse dense chart blocks beyond this many rows (memory guard).
pub const MAX_BLOCK_NODES: usize = 8192;

/// A chart, its planar metric field, a grid, the cutoff pair and the window.
#[derive(Clone, Debug)]
pub struct PlanarProblem {
    pub chart: BuiltinChart,
    pub field: BuiltinMetric,
    pub grid: PlanarGrid,
    pub cutoffs: CutoffPair,
    pub window_fraction: f64,
}

impl PlanarProblem {
    /// Validates the support condition, the nesting of the cutoffs inside the
    /// chart (and inside the region where the metric is the chart metric) and
    /// that the window lies where `χ₁ = 1`.
    pub fn new(
        chart: BuiltinChart,
        field: BuiltinMetric,
        grid: PlanarGrid,
        cutoffs: CutoffPair,
        window_fraction: f64,
    ) -> LabResult<Self> {
        use enp_core::geometry::Chart;
        if grid.half_width() < 2.0 * field.support_radius() {
            return Err(LabError::Config(format!(
                "grid half-width {} is below twice the metric support radius {}",
                grid.half_width(),
                field.support_radius()
            )));
        }
        let [r1, _, r3] = cutoffs.radii();
        if !chart.domain().contains_disk(r3) {
            return Err(LabError::Config(format!(
                "outer cutoff radius {r3} leaves the chart domain"
            )));
        }
        for k in 0..64 {
            let (s, c) = (std::f64::consts::TAU * k as f64 / 64.0).sin_cos();
            for t in [0.25, 0.5, 0.75, 1.0] {
                let u = [t * r3 * c, t * r3 * s];
                let g = metric_from_chart(&chart, u)?;
                if g.max_abs_diff(&field.evaluate(u)) > 1e-12 {
                    return Err(LabError::Config(format!(
                        "cutoff radius {r3} reaches where the planar metric is no longer the chart metric"
                    )));
                }
            }
        }
        let window = grid.window(window_fraction)?;
        if window.half_extent() * std::f64::consts::SQRT_2 > r1 {
            return Err(LabError::Config(format!(
                "window half-extent {} does not fit inside the inner cutoff radius {r1}",
                window.half_extent()
            )));
        }
        Ok(Self {
            chart,
            field,
            grid,
            cutoffs,
            window_fraction,
        })
    }

    pub fn window(&self) -> Vec<usize> {
        self.grid
            .window(self.window_fraction)
            .expect("validated in new")
            .indices()
    }

    /// Nodes where `G ≠ I`.
    pub fn support(&self) -> Vec<usize> {
        (0..self.grid.len())
            .filter(|&p| !self.field.evaluate(self.grid.node(p)).is_identity())
            .collect()
    }

    /// Nodes where `χ₁ ≠ 0`.
    pub fn cutoff_support(&self) -> Vec<usize> {
        (0..self.grid.len())
            .filter(|&p| self.cutoffs.chi1(self.grid.node(p)) != 0.0)
            .collect()
    }

    pub fn metric(&self, p: usize) -> Sym2 {
        self.field.evaluate(self.grid.node(p))
    }

    pub fn mij(&self, p: usize) -> LabResult<MijCoefficients> {
        Ok(mij_coefficients(&self.chart, self.grid.node(p))?)
    }
}

/// Frozen-symbol kernel tables on one grid.
///
/// The symbols are purely imaginary, `σ_j(G, ξ) = i b_j(G, ξ)` with
/// `b_j = -det(G)^{-1/2} (G⁻¹ξ)_j / √(ξᵀG⁻¹ξ)`, so the engine works with the
/// real `b_j` and callers combine them into the symbol they need.
pub struct KernelEngine {
    n: usize,
    fft: Fft2,
    xi: Vec<[f64; 2]>,
    flat: Vec<[f64; 2]>,
    buf: Vec<Complex64>,
}

impl KernelEngine {
    pub fn new(grid: &PlanarGrid) -> Self {
        let n = grid.n_per_side();
        let w = angular_frequencies(n, grid.spacing());
        let nyq = n / 2;
        let mut xi = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                // Nyquist lines and ξ = 0 are dropped by zeroing ξ.
                xi.push(if a == nyq || b == nyq {
                    [0.0, 0.0]
                } else {
                    [w[a], w[b]]
                });
            }
        }
        let mut eng = Self {
            n,
            fft: Fft2::new(n),
            flat: Vec::new(),
            xi,
            buf: vec![Complex64::default(); n * n],
        };
        eng.flat = eng.symbols(&Sym2::IDENTITY);
        eng
    }

    /// `(b_1, b_2)` of `G` at every frequency (zero where `ξ` was dropped).
    pub fn symbols(&self, g: &Sym2) -> Vec<[f64; 2]> {
        let mut out = vec![[0.0; 2]; self.xi.len()];
        self.symbols_into(g, &mut out);
        out
    }

    fn symbols_into(&self, g: &Sym2, out: &mut [[f64; 2]]) {
        let det = g.det();
        let (i11, i12, i22) = (g.g22 / det, -g.g12 / det, g.g11 / det);
        let c = -1.0 / det.sqrt();
        for (o, x) in out.iter_mut().zip(&self.xi) {
            let a1 = i11 * x[0] + i12 * x[1];
            let a2 = i12 * x[0] + i22 * x[1];
            let q = x[0] * a1 + x[1] * a2;
            *o = if q > 0.0 {
                let s = c / q.sqrt();
                [a1 * s, a2 * s]
            } else {
                [0.0, 0.0]
            };
        }
    }

    /// Inverse DFT (scaled by `1/N²`) of `sym(b(G), b(I))` over all
    /// frequencies. Pack two Hermitian symbols as `a + i b` to get two real
    /// kernels as the real and imaginary parts.
    pub fn table<F>(&mut self, g: &Sym2, mut sym: F) -> &[Complex64]
    where
        F: FnMut([f64; 2], [f64; 2]) -> Complex64,
    {
        let det = g.det();
        let (i11, i12, i22) = (g.g22 / det, -g.g12 / det, g.g11 / det);
        let c = -1.0 / det.sqrt();
        for ((o, x), f) in self.buf.iter_mut().zip(&self.xi).zip(&self.flat) {
            let a1 = i11 * x[0] + i12 * x[1];
            let a2 = i12 * x[0] + i22 * x[1];
            let q = x[0] * a1 + x[1] * a2;
            *o = if q > 0.0 {
                let s = c / q.sqrt();
                sym([a1 * s, a2 * s], *f)
            } else {
                Complex64::default()
            };
        }
        self.fft.inverse(&mut self.buf);
        let scale = 1.0 / (self.n * self.n) as f64;
        for v in &mut self.buf {
            *v *= scale;
        }
        &self.buf
    }

    /// `k_1(G; ·) + i k_2(G; ·)`: `σ_1 + iσ_2 = -b_2 + i b_1`.
    pub fn riesz_pair(&mut self, g: &Sym2) -> &[Complex64] {
        self.table(g, |b, _| Complex64::new(-b[1], b[0]))
    }
}

/// Index of the offset `p - q` in an `n×n` kernel table.
#[inline]
pub fn offset(n: usize, p: usize, q: usize) -> usize {
    let di = (p / n + n - q / n) % n;
    let dj = (p % n + n - q % n) % n;
    di * n + dj
}

fn gemm_add(dst: &mut Mat<f64>, lhs: MatRef<'_, f64>, rhs: MatRef<'_, f64>) {
    matmul(dst.as_mut(), Accum::Add, lhs, rhs, 1.0, Par::Seq);
}

pub fn gemm(lhs: MatRef<'_, f64>, rhs: MatRef<'_, f64>) -> Mat<f64> {
    let mut out = Mat::zeros(lhs.nrows(), rhs.ncols());
    matmul(out.as_mut(), Accum::Replace, lhs, rhs, 1.0, Par::Seq);
    out
}

/// The window blocks of `R_i R_j`, the frozen composition `R_12` and the
/// single transforms `R_j`.
pub struct RieszProducts {
    pub window: Vec<usize>,
    /// `p[i][j] = (R_{i+1} R_{j+1})_{WW}`.
    pub p: [[Mat<f64>; 2]; 2],
    pub frozen12: Mat<f64>,
    pub a: [Mat<f64>; 2],
}

pub fn riesz_products(problem: &PlanarProblem) -> LabResult<RieszProducts> {
    let grid = &problem.grid;
    let window = problem.window();
    let support = problem.support();
    let (nw, ns) = (window.len(), support.len());
    let mut eng = KernelEngine::new(grid);
    let n = grid.n_per_side();

    let flat: Vec<Complex64> = eng.riesz_pair(&Sym2::IDENTITY).to_vec();
    // Δ_j(r; r - q) stored transposed: column r, row q.
    let mut delta_t = [Mat::<f64>::zeros(nw, ns), Mat::<f64>::zeros(nw, ns)];
    for (s, &r) in support.iter().enumerate() {
        let g = problem.metric(r);
        let tab = eng.riesz_pair(&g);
        for (w, &q) in window.iter().enumerate() {
            let o = offset(n, r, q);
            let d = tab[o] - flat[o];
            delta_t[0][(w, s)] = d.re;
            delta_t[1][(w, s)] = d.im;
        }
    }

    // k_i(G_p; p - r) stored transposed: column p, row r.
    let mut left_t = [Mat::<f64>::zeros(ns, nw), Mat::<f64>::zeros(ns, nw)];
    let mut p = [
        [Mat::<f64>::zeros(nw, nw), Mat::<f64>::zeros(nw, nw)],
        [Mat::<f64>::zeros(nw, nw), Mat::<f64>::zeros(nw, nw)],
    ];
    let mut frozen12 = Mat::<f64>::zeros(nw, nw);
    let mut a = [Mat::<f64>::zeros(nw, nw), Mat::<f64>::zeros(nw, nw)];
    for (w, &pn) in window.iter().enumerate() {
        let g = problem.metric(pn);
        {
            let tab = eng.riesz_pair(&g);
            for (s, &r) in support.iter().enumerate() {
                let k = tab[offset(n, pn, r)];
                left_t[0][(s, w)] = k.re;
                left_t[1][(s, w)] = k.im;
            }
            for (v, &q) in window.iter().enumerate() {
                let k = tab[offset(n, pn, q)];
                a[0][(w, v)] = k.re;
                a[1][(w, v)] = k.im;
            }
        }
        // σ_i(G_p) σ_j(I) = -b_i f_j, packed over j.
        for i in 0..2 {
            let tab = eng.table(&g, |b, f| Complex64::new(-b[i] * f[0], -b[i] * f[1]));
            for (v, &q) in window.iter().enumerate() {
                let k = tab[offset(n, pn, q)];
                p[i][0][(w, v)] = k.re;
                p[i][1][(w, v)] = k.im;
            }
        }
        let tab = eng.table(&g, |b, _| Complex64::new(-b[0] * b[1], 0.0));
        for (v, &q) in window.iter().enumerate() {
            frozen12[(w, v)] = tab[offset(n, pn, q)].re;
        }
    }
    for i in 0..2 {
        for j in 0..2 {
            gemm_add(
                &mut p[i][j],
                left_t[i].as_ref().transpose(),
                delta_t[j].as_ref().transpose(),
            );
        }
    }
    Ok(RieszProducts {
        window,
        p,
        frozen12,
        a,
    })
}

/// Chart operators: the window rows `X_a[W, D]` (cutoff `χ₁` folded into
/// the columns) and `X_a[D, W]`, for `a = 12, 13, 23` in that order, where
/// `D` is the support of `χ₁`. Products of two chart operators on the window
/// only run over `D` because `χ₁χ₂ = χ₁`.
pub struct ChartBlocks {
    pub window: Vec<usize>,
    pub inner: Vec<usize>,
    pub left: [Mat<f64>; 3],
    pub right: [Mat<f64>; 3],
}

fn chart_row(m: &MijCoefficients, a: usize, k: Complex64) -> f64 {
    m[a][0] * k.re + m[a][1] * k.im
}

pub fn chart_blocks(problem: &PlanarProblem) -> LabResult<ChartBlocks> {
    let grid = &problem.grid;
    let window = problem.window();
    let inner = problem.cutoff_support();
    let (nw, nd) = (window.len(), inner.len());
    if nd > MAX_BLOCK_NODES {
        return Err(LabError::Config(format!(
            "chart blocks over {nd} cutoff-support nodes exceed the dense limit; use a coarser grid"
        )));
    }
    let chi1: Vec<f64> = inner
        .iter()
        .map(|&r| problem.cutoffs.chi1(grid.node(r)))
        .collect();
    let mut eng = KernelEngine::new(grid);
    let n = grid.n_per_side();
    let mut left = [(); 3].map(|_| Mat::<f64>::zeros(nw, nd));
    let mut right = [(); 3].map(|_| Mat::<f64>::zeros(nd, nw));
    for (w, &pn) in window.iter().enumerate() {
        let g = problem.metric(pn);
        let m = problem.mij(pn)?;
        let chi2 = problem.cutoffs.chi2(grid.node(pn));
        let tab = eng.riesz_pair(&g);
        for (d, &r) in inner.iter().enumerate() {
            let k = tab[offset(n, pn, r)];
            for a in 0..3 {
                left[a][(w, d)] = chi2 * chart_row(&m, a, k) * chi1[d];
            }
        }
    }
    for (d, &r) in inner.iter().enumerate() {
        let g = problem.metric(r);
        let m = problem.mij(r)?;
        let chi2 = problem.cutoffs.chi2(grid.node(r));
        let tab = eng.riesz_pair(&g);
        for (w, &q) in window.iter().enumerate() {
            let k = tab[offset(n, r, q)];
            let c1 = problem.cutoffs.chi1(grid.node(q));
            for a in 0..3 {
                right[a][(d, w)] = chi2 * chart_row(&m, a, k) * c1;
            }
        }
    }
    Ok(ChartBlocks {
        window,
        inner,
        left,
        right,
    })
}

/// `X_a` restricted to the window.
pub fn chart_window_block(problem: &PlanarProblem, a: usize) -> LabResult<Mat<f64>> {
    let grid = &problem.grid;
    let window = problem.window();
    let nw = window.len();
    let mut eng = KernelEngine::new(grid);
    let n = grid.n_per_side();
    let mut out = Mat::<f64>::zeros(nw, nw);
    for (w, &pn) in window.iter().enumerate() {
        let g = problem.metric(pn);
        let m = problem.mij(pn)?;
        let chi2 = problem.cutoffs.chi2(grid.node(pn));
        let tab = eng.riesz_pair(&g);
        for (v, &q) in window.iter().enumerate() {
            let c1 = problem.cutoffs.chi1(grid.node(q));
            out[(w, v)] = chi2 * chart_row(&m, a, tab[offset(n, pn, q)]) * c1;
        }
    }
    Ok(out)
}

/// Block-antisymmetric `𝐑` on `D` (3|D| square) with blocks `X12, X13, X23`.
/// The lower blocks are exact negations of the upper ones.
pub fn br_matrix(problem: &PlanarProblem) -> LabResult<(Vec<usize>, Mat<f64>)> {
    let grid = &problem.grid;
    let inner = problem.cutoff_support();
    let nd = inner.len();
    if 3 * nd > MAX_BLOCK_NODES {
        return Err(LabError::Config(format!(
            "𝐑 on {nd} cutoff-support nodes exceeds the dense limit; use a coarser grid"
        )));
    }
    let mut eng = KernelEngine::new(grid);
    let n = grid.n_per_side();
    let mut br = Mat::<f64>::zeros(3 * nd, 3 * nd);
    // Upper blocks (0,1) = X12, (0,2) = X13, (1,2) = X23.
    let slots = [(0usize, 1usize), (0, 2), (1, 2)];
    for (d, &r) in inner.iter().enumerate() {
        let g = problem.metric(r);
        let m = problem.mij(r)?;
        let chi2 = problem.cutoffs.chi2(grid.node(r));
        let tab = eng.riesz_pair(&g);
        for (e, &s) in inner.iter().enumerate() {
            let k = tab[offset(n, r, s)];
            let c1 = problem.cutoffs.chi1(grid.node(s));
            for (a, &(bi, bj)) in slots.iter().enumerate() {
                let v = chi2 * chart_row(&m, a, k) * c1;
                br[(bi * nd + d, bj * nd + e)] = v;
                br[(bj * nd + d, bi * nd + e)] = -v;
            }
        }
    }
    Ok((inner, br))
}

/// `(𝐑³)_{WW}` and `𝐑_{WW}` from the `D`-block matrix.
pub fn br_cube_window(
    inner: &[usize],
    br: &Mat<f64>,
    window: &[usize],
) -> LabResult<(Mat<f64>, Mat<f64>)> {
    let nd = inner.len();
    let pos: std::collections::HashMap<usize, usize> =
        inner.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let wd: Vec<usize> = window
        .iter()
        .map(|q| {
            pos.get(q).copied().ok_or_else(|| {
                LabError::Config("window leaves the support of the inner cutoff".into())
            })
        })
        .collect::<LabResult<_>>()?;
    let nw = wd.len();
    let idx = |k: usize| (k / nw) * nd + wd[k % nw];
    let rows = Mat::<f64>::from_fn(3 * nw, 3 * nd, |i, j| br[(idx(i), j)]);
    let cols = Mat::<f64>::from_fn(3 * nd, 3 * nw, |i, j| br[(i, idx(j))]);
    let mid = gemm(br.as_ref(), cols.as_ref());
    let cube = gemm(rows.as_ref(), mid.as_ref());
    let r_ww = Mat::<f64>::from_fn(3 * nw, 3 * nw, |i, j| br[(idx(i), idx(j))]);
    Ok((cube, r_ww))
}
