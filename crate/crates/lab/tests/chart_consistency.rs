//! The pulled-back rotation operator against the chart block operator.
//!
//! On a window where both cutoffs equal one, `Φ* 𝐓` and `𝐑 Φ*` have the
//! same principal part: with `N = ∂₁Φ × ∂₂Φ` one has
//! `N × DΦ w = Σ_j (g_{j1} ∂₂Φ - g_{j2} ∂₁Φ) w_j`, whose components are the
//! `m_ij` rows. Their difference is weakly singular, so its singular values
//! must decay under refinement while those of `𝐑` do not.

use std::f64::consts::PI;

use enp_core::elastic::k1_kernel;
use enp_core::geometry::{
    area_element, builtin_surface, metric_from_chart, mij_coefficients, unit_normal, BuiltinChart,
    Chart, SurfaceKind,
};
use enp_core::riesz::l_form;
use enp_core::spectra::{is_strictly_decreasing, DecayLevel};
use enp_lab::acceptance::TAIL_Q;
use enp_lab::linalg::singular_values;
use faer::Mat;

/// Block `(a, b)` of `Φ*𝐓` and the matching `X` block, both punctured
/// Riemann sums on the `n × n` cell-centred grid of `[-s, s]²`.
fn blocks(chart: &BuiltinChart, n: usize, s: f64, a: usize, b: usize) -> (Mat<f64>, Mat<f64>) {
    let h = 2.0 * s / n as f64;
    let nodes: Vec<[f64; 2]> = (0..n * n)
        .map(|p| [-s + (p / n) as f64 * h + 0.5 * h, -s + (p % n) as f64 * h + 0.5 * h])
        .collect();
    let x: Vec<_> = nodes.iter().map(|&u| chart.eval(u)).collect();
    let row = match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (1, 2) => 2,
        _ => unreachable!(),
    };
    let mut pulled = Mat::zeros(n * n, n * n);
    let mut chart_op = Mat::zeros(n * n, n * n);
    for (p, &u) in nodes.iter().enumerate() {
        let jac = area_element(chart, u).unwrap();
        let nx = unit_normal(chart, u).unwrap();
        let g = metric_from_chart(chart, u).unwrap();
        let m = mij_coefficients(chart, u).unwrap()[row];
        for (q, &v) in nodes.iter().enumerate() {
            if p == q {
                continue;
            }
            pulled[(p, q)] = jac * k1_kernel(x[p], x[q], nx).unwrap()[a][b] * h * h;
            let w = [u[0] - v[0], u[1] - v[1]];
            let l = l_form(&g, w).unwrap();
            chart_op[(p, q)] = h * h / (2.0 * PI) * l * (m[0] * w[0] + m[1] * w[1]);
        }
    }
    (pulled, chart_op)
}

fn check(kind: SurfaceKind, half: f64) {
    enp_lab::linalg::init_sequential();
    let chart = builtin_surface(kind).unwrap().chart;
    assert!(chart.domain().contains_disk(half * std::f64::consts::SQRT_2));
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let mut tails = Vec::new();
        let mut refs = Vec::new();
        for (k, n) in [8, 16, 32].into_iter().enumerate() {
            let (pulled, chart_op) = blocks(&chart, n, half, a, b);
            let diff = &pulled - &chart_op;
            let lvl = DecayLevel::new(
                k,
                n,
                singular_values(diff.as_ref()).unwrap(),
                singular_values(chart_op.as_ref()).unwrap(),
            )
            .unwrap();
            tails.push(lvl.tail_at(TAIL_Q).unwrap());
            refs.push(lvl.reference_tail_at(TAIL_Q).unwrap());
        }
        assert!(is_strictly_decreasing(&tails), "{kind:?} ({a},{b}): {tails:?}");
        assert!(tails[2] < 0.5 * refs[2], "{kind:?} ({a},{b}): {tails:?} vs {refs:?}");
    }
}

#[test]
fn graph_bump_pullback_matches_chart_blocks() {
    check(SurfaceKind::GraphBumpSmooth, 0.5);
}

#[test]
fn sphere_pullback_matches_chart_blocks() {
    check(SurfaceKind::UnitSphere, 0.5);
}

/// The principal parts agree pointwise: at short range the two kernels
/// differ by a term one order weaker.
#[test]
fn kernels_agree_at_short_range() {
    let chart = builtin_surface(SurfaceKind::GraphBumpSmooth).unwrap().chart;
    let u = [0.2, -0.1];
    let x = chart.eval(u);
    let nx = unit_normal(&chart, u).unwrap();
    let jac = area_element(&chart, u).unwrap();
    let g = metric_from_chart(&chart, u).unwrap();
    let m = mij_coefficients(&chart, u).unwrap();
    let mut prev = f64::INFINITY;
    for t in [1e-2, 1e-3, 1e-4] {
        let w = [0.6 * t, 0.8 * t];
        let y = chart.eval([u[0] - w[0], u[1] - w[1]]);
        let k = k1_kernel(x, y, nx).unwrap();
        let l = l_form(&g, w).unwrap() / (2.0 * PI);
        let mut rel: f64 = 0.0;
        for (row, (a, b)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            let want = l * (m[row][0] * w[0] + m[row][1] * w[1]);
            rel = rel.max((jac * k[a][b] - want).abs() * t * t);
            assert_eq!(k[b][a], -k[a][b]);
        }
        assert!(rel < prev, "{rel} at {t}");
        prev = rel;
    }
    assert!(prev < 1e-3);
}
