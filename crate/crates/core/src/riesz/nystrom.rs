//! Nyström rules for `R_j^g` on a [`PlanarGrid`].
//!
//! Row `p` freezes `G(u_p)`, so `A[p, q] = (1/2π) r_j(G(u_p), u_p - u_q) h²`
//! for `q ≠ p` and `A[p, p] = 0`. Oddness of `r_j` makes the punctured sum a
//! consistent principal value, but only to first order: the even part of
//! the integrand, `-r_j(w) w·∇f`, is homogeneous of degree -1, and its
//! lattice sum differs from the integral by `h · C_jk(G)`, where
//!
//! ```text
//! C_jk(G) = lim_R [ ∫ ψ(|x|/R) x_j x_k Q(x)^{-3/2} dx - Σ_{n≠0} ψ(|n|/R) n_j n_k Q(n)^{-3/2} ]
//! ```
//!
//! for `Q(x) = ⟨x, G x⟩`. [`PvRule::LatticeCorrected`] adds that term back
//! with a central difference for `∇f`, which only touches the four nearest
//! neighbours and keeps the diagonal at zero. For `G = I`,
//! `C_11 = -2 ζ(1/2) β(1/2)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::dense::{DenseMatrix, OperatorMatrix};
use crate::error::{Error, Result};
use crate::geometry::{MetricField, Sym2};

use super::grid::PlanarGrid;
use super::kernel::Axis;

/// `C_11(I) = -2 ζ(1/2) β(1/2)`.
pub const FLAT_LATTICE_CONSTANT: f64 = 1.950_132_460_000_9;

/// Principal-value rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PvRule {
    /// Zero diagonal, plain Riemann sum elsewhere.
    Punctured,
    /// Punctured sum plus the first-order lattice correction.
    #[default]
    LatticeCorrected,
}

/// Radius (in lattice units) of the smooth cutoff used for `C_jk(G)`.
const LATTICE_RADIUS: f64 = 32.0;
const ANGULAR_NODES: usize = 512;

/// `C^∞` step: 0 on `(-∞, 0]`, 1 on `[1, ∞)`, with `s(x) + s(1-x) = 1`.
fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let a = libm::exp(-1.0 / x);
    let b = libm::exp(-1.0 / (1.0 - x));
    a / (a + b)
}

/// The lattice constants `C_jk(G)` as a symmetric matrix.
///
/// Uses the cutoff `ψ(t) = 1 - s(t)` on `[0, 1]`, whose integral is `1/2`,
/// so the continuous part is `R/2 · ∮ ω_j ω_k Q(ω)^{-3/2} dθ`. At `R = 32`
/// the flat value is reproduced to about `1e-8`.
pub fn lattice_correction(g: &Sym2) -> Sym2 {
    let r = LATTICE_RADIUS;
    let mut ring = [0.0; 3];
    for k in 0..ANGULAR_NODES {
        let (s, c) = libm::sincos(TAU * k as f64 / ANGULAR_NODES as f64);
        let q = g.quad([c, s]);
        let l = 1.0 / (q * libm::sqrt(q));
        ring[0] += c * c * l;
        ring[1] += c * s * l;
        ring[2] += s * s * l;
    }
    let dtheta = TAU / ANGULAR_NODES as f64;
    let m = libm::ceil(r) as i64;
    let mut sum = [0.0; 3];
    // Half plane; the summand is even in n.
    for a in 0..=m {
        for b in -m..=m {
            if a == 0 && b <= 0 {
                continue;
            }
            let (x, y) = (a as f64, b as f64);
            let rad = libm::hypot(x, y);
            if rad >= r {
                continue;
            }
            let q = g.quad([x, y]);
            let w = (1.0 - smooth_step(rad / r)) / (q * libm::sqrt(q));
            sum[0] += x * x * w;
            sum[1] += x * y * w;
            sum[2] += y * y * w;
        }
    }
    let c = |i: usize| 0.5 * r * ring[i] * dtheta - 2.0 * sum[i];
    Sym2::new(c(0), c(1), c(2))
}

/// Translation-invariant stencil of one frozen metric: entry for the offset
/// `o = p - q` in grid units, `o ∈ [-(N-1), N-1]²`.
#[derive(Clone, Debug, PartialEq)]
pub struct Stencil {
    n: usize,
    values: Vec<f64>,
}

impl Stencil {
    pub fn new(g: &Sym2, grid: &PlanarGrid, axis: Axis, rule: PvRule) -> Self {
        let n = grid.n_per_side();
        let side = 2 * n - 1;
        // (1/2π) r_j(h·o) h² = o_j / (2π Q(o)^{3/2}): independent of h.
        let scale = 1.0 / TAU;
        let mut values = vec![0.0; side * side];
        let off = n as i64 - 1;
        for a in -off..=off {
            for b in -off..=off {
                if a == 0 && b == 0 {
                    continue;
                }
                let o = [a as f64, b as f64];
                let q = g.quad(o);
                values[((a + off) as usize) * side + (b + off) as usize] =
                    scale * o[axis.index()] / (q * libm::sqrt(q));
            }
        }
        let mut st = Self { n, values };
        if rule == PvRule::LatticeCorrected {
            let c = lattice_correction(g);
            let cj = match axis {
                Axis::U1 => [c.g11, c.g12],
                Axis::U2 => [c.g12, c.g22],
            };
            // q = p + e_k is the offset -e_k.
            for (k, ck) in cj.into_iter().enumerate() {
                let e = if k == 0 { [1, 0] } else { [0, 1] };
                *st.at_mut(e[0], e[1]) += ck / (4.0 * PI);
                *st.at_mut(-e[0], -e[1]) -= ck / (4.0 * PI);
            }
        }
        st
    }

    pub fn n_per_side(&self) -> usize {
        self.n
    }

    /// Coefficient for the offset `(a, b) = p - q`.
    pub fn at(&self, a: i64, b: i64) -> f64 {
        let off = self.n as i64 - 1;
        self.values[((a + off) as usize) * (2 * self.n - 1) + (b + off) as usize]
    }

    fn at_mut(&mut self, a: i64, b: i64) -> &mut f64 {
        let off = self.n as i64 - 1;
        &mut self.values[((a + off) as usize) * (2 * self.n - 1) + (b + off) as usize]
    }

    /// Row-major `(2N-1)²` table, offset `(-(N-1), -(N-1))` first.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Matrix-free Nyström discretization of `R_j^g`.
pub struct NystromRiesz<'a, M: ?Sized> {
    field: &'a M,
    grid: PlanarGrid,
    axis: Axis,
    rule: PvRule,
    /// Metric at each node, and the stencil of the identity rows.
    metrics: Vec<Sym2>,
    flat: Stencil,
}

impl<'a, M: MetricField + ?Sized> NystromRiesz<'a, M> {
    pub fn new(field: &'a M, grid: PlanarGrid, axis: Axis, rule: PvRule) -> Result<Self> {
        if grid.half_width() < 2.0 * field.support_radius() {
            return Err(Error::Config(alloc::format!(
                "grid half-width {} is below twice the metric support radius {}",
                grid.half_width(),
                field.support_radius()
            )));
        }
        let metrics = (0..grid.len()).map(|p| field.evaluate(grid.node(p))).collect();
        Ok(Self {
            field,
            grid,
            axis,
            rule,
            metrics,
            flat: Stencil::new(&Sym2::IDENTITY, &grid, axis, rule),
        })
    }

    pub fn grid(&self) -> &PlanarGrid {
        &self.grid
    }

    pub fn field(&self) -> &M {
        self.field
    }

    /// Stencil of a row whose metric is `g`.
    fn stencil_for(&self, g: &Sym2) -> Option<Stencil> {
        if g.is_identity() {
            None
        } else {
            Some(Stencil::new(g, &self.grid, self.axis, self.rule))
        }
    }

    /// Fill row `p` of the matrix.
    pub fn row_into(&self, p: usize, out: &mut [f64]) {
        let n = self.grid.n_per_side() as i64;
        let owned = self.stencil_for(&self.metrics[p]);
        let st = owned.as_ref().unwrap_or(&self.flat);
        let (pi, pj) = (p as i64 / n, p as i64 % n);
        for (q, o) in out.iter_mut().enumerate() {
            let (qi, qj) = (q as i64 / n, q as i64 % n);
            *o = st.at(pi - qi, pj - qj);
        }
    }

    /// Apply the matrix to a grid function. `O(K²)`; rows with a non-flat
    /// metric build their own stencil, so this is meant for moderate grids.
    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.grid.len() {
            return Err(Error::Parameter("grid function has the wrong length".into()));
        }
        let n = self.grid.n_per_side() as i64;
        let mut out = vec![0.0; f.len()];
        for (p, o) in out.iter_mut().enumerate() {
            let owned = self.stencil_for(&self.metrics[p]);
            let st = owned.as_ref().unwrap_or(&self.flat);
            let (pi, pj) = (p as i64 / n, p as i64 % n);
            let mut acc = 0.0;
            for (q, &fq) in f.iter().enumerate() {
                let (qi, qj) = (q as i64 / n, q as i64 % n);
                acc += st.at(pi - qi, pj - qj) * fq;
            }
            *o = acc;
        }
        Ok(out)
    }

    /// The stencil used by every identity-metric row.
    pub fn flat_stencil(&self) -> &Stencil {
        &self.flat
    }
}

/// Largest grid (in nodes) [`assemble_riesz`] will materialize densely.
pub const MAX_DENSE_NODES: usize = 8192;

/// Dense Nyström matrix of `R_j^g`.
pub fn assemble_riesz<M: MetricField + ?Sized>(
    field: &M,
    grid: &PlanarGrid,
    j: Axis,
    rule: PvRule,
) -> Result<OperatorMatrix> {
    if grid.len() > MAX_DENSE_NODES {
        return Err(Error::Config(alloc::format!(
            "{} nodes exceed the dense assembly limit {MAX_DENSE_NODES}; use the matrix-free form",
            grid.len()
        )));
    }
    let op = NystromRiesz::new(field, *grid, j, rule)?;
    let k = grid.len();
    let mut m = DenseMatrix::zeros(k, k);
    for p in 0..k {
        op.row_into(p, m.row_mut(p));
    }
    let nodes = grid.nodes();
    let h2 = grid.spacing() * grid.spacing();
    Ok(OperatorMatrix {
        matrix: m,
        row_nodes: nodes.clone(),
        col_nodes: nodes,
        col_weights: vec![h2; k],
    })
}
