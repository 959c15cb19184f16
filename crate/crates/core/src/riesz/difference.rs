//! The kernel of `R_i^g R_j^g - R_ij`:
//!
//! ```text
//! k(u, w) = ∫_{|u-v|>δ₁, |v-w|>δ₂} r_i(u, u-v) [r_j(v, v-w) - r_j(u, v-w)] dv.
//! ```
//!
//! With `d = |u - w|` the plane is split into the disk `B(w, d/2)`, done in
//! polar coordinates about `w` with `θ` paired against `θ + π` so the
//! principal-value part cancels before it is summed, and the rest, done in
//! polar coordinates about `u` with the arc inside `B(w, d/2)` removed. The
//! second part runs out to `R = max(8d, |u| + ρ_G + d)` where `ρ_G` is the
//! support radius of the metric. Beyond `R` we have `G(v) = I`, but the bracket
//! does not vanish unless `G(u) = I`, and the integrand decays only like
//! `|v|^{-4}`. That far field is a smooth function of `(u, w)` of size
//! `O(R^{-2})`, which is not small next to the near field once `d` is
//! moderate, so it is integrated too, after the substitution `s = R/t`. The
//! analytic bound `4π λ_min^{-3} / (R - d)²` on it is reported alongside.

use core::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::{MetricField, Sym2};
use crate::quadrature::integrate;

use super::kernel::Axis;

/// Value of the difference kernel with its error budget.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DifferenceKernel {
    pub value: f64,
    /// Summed adaptive-quadrature error estimate.
    pub quadrature_error: f64,
    /// The part from `|v - u| > R`, included in `value`.
    pub far_field: f64,
    /// Analytic bound on `|far_field|`.
    pub tail_bound: f64,
}

#[inline]
fn r(axis: Axis, g: &Sym2, w: [f64; 2]) -> f64 {
    let q = g.quad(w);
    w[axis.index()] / (q * libm::sqrt(q))
}

const REL_TOL: f64 = 1e-9;
const MAX_PANELS: usize = 400;

/// `k_{δ₁,δ₂}(u, w)` for the pair `(i, j)`.
pub fn difference_kernel<M: MetricField + ?Sized>(
    field: &M,
    u: [f64; 2],
    w: [f64; 2],
    delta1: f64,
    delta2: f64,
    pair: (Axis, Axis),
) -> Result<DifferenceKernel> {
    let d = libm::hypot(u[0] - w[0], u[1] - w[1]);
    if d == 0.0 {
        return Err(Error::Domain("difference kernel needs u ≠ w".into()));
    }
    if !(delta1 >= 0.0 && delta2 >= 0.0 && 2.0 * delta1.max(delta2) < d) {
        return Err(Error::Domain(alloc::format!(
            "need 0 ≤ δ and 2·max(δ₁, δ₂) < |u - w|, got δ₁ = {delta1}, δ₂ = {delta2}, |u - w| = {d}"
        )));
    }
    let (i, j) = pair;
    let gu = field.evaluate(u);
    let integrand = |v: [f64; 2]| -> f64 {
        let gv = field.evaluate(v);
        if gv == gu {
            return 0.0;
        }
        let vw = [v[0] - w[0], v[1] - w[1]];
        r(i, &gu, [u[0] - v[0], u[1] - v[1]]) * (r(j, &gv, vw) - r(j, &gu, vw))
    };
    let rho = 0.5 * d;
    // Scale for the absolute tolerance: the integrand is O(d^-4) over an
    // O(d²) region near the pair.
    let abs_tol = 1e-10 / (d * d);
    let mut err = 0.0;

    // Disk about w, θ paired with θ + π.
    let disk = integrate(
        |s| {
            let inner = integrate(
                |t| {
                    let (st, ct) = libm::sincos(t);
                    let a = integrand([w[0] + s * ct, w[1] + s * st]);
                    let b = integrand([w[0] - s * ct, w[1] - s * st]);
                    (a + b) * s
                },
                0.0,
                PI,
                abs_tol,
                REL_TOL,
                MAX_PANELS,
            );
            inner.value
        },
        delta2,
        rho,
        abs_tol,
        REL_TOL,
        MAX_PANELS,
    );
    err += disk.error;

    // Polar about u, skipping the arc inside B(w, ρ).
    let theta_w = libm::atan2(w[1] - u[1], w[0] - u[0]);
    let outer = (8.0 * d).max(libm::hypot(u[0], u[1]) + field.support_radius() + d);
    let ring = |s: f64| -> f64 {
        let gap = if (s - d).abs() < rho {
            let c = ((s * s + d * d - rho * rho) / (2.0 * s * d)).clamp(-1.0, 1.0);
            libm::acos(c)
        } else {
            0.0
        };
        integrate(
            |t| {
                let (st, ct) = libm::sincos(t);
                integrand([u[0] + s * ct, u[1] + s * st]) * s
            },
            theta_w + gap,
            theta_w + TAU - gap,
            abs_tol,
            REL_TOL,
            MAX_PANELS,
        )
        .value
    };
    // Split at the radii where the excluded arc appears and disappears.
    let breaks = [delta1, d - rho, d + rho, outer];
    let mut annulus = 0.0;
    for win in breaks.windows(2) {
        let (a, b) = (win[0].max(delta1), win[1]);
        if b > a {
            let part = integrate(ring, a, b, abs_tol, REL_TOL, MAX_PANELS);
            annulus += part.value;
            err += part.error;
        }
    }

    // s = R/t maps [R, ∞) onto (0, 1]; ring(s) = O(s^-3), so the
    // transformed integrand is O(t).
    let far = integrate(
        |t| {
            if t <= 0.0 {
                return 0.0;
            }
            ring(outer / t) * outer / (t * t)
        },
        0.0,
        1.0,
        abs_tol,
        REL_TOL,
        MAX_PANELS,
    );
    err += far.error;

    let (lmin, _) = gu.eigenvalues();
    let lmin = lmin.min(1.0);
    // ∫_{|v-u|>R} 2 λ^{-3} / (|v-u|² (|v-u| - d)²) dv ≤ 4π λ^{-3} / (R - d)².
    let tail_bound = 2.0 * TAU / (lmin * lmin * lmin * (outer - d) * (outer - d));

    Ok(DifferenceKernel {
        value: disk.value + annulus + far.value,
        quadrature_error: err,
        far_field: far.value,
        tail_bound,
    })
}
