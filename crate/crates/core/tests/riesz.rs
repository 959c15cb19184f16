use std::f64::consts::TAU;

use approx::assert_relative_eq;
use enp_core::geometry::{builtin_surface, IdentityMetric, MetricField, SurfaceKind, Sym2};
use enp_core::riesz::*;
use enp_core::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn smooth_field() -> impl MetricField {
    builtin_surface(SurfaceKind::GraphBumpSmooth).unwrap().metric_field().unwrap()
}

fn holder_field() -> impl MetricField {
    builtin_surface(SurfaceKind::GraphBumpHolder { alpha: 0.5 })
        .unwrap()
        .metric_field()
        .unwrap()
}

#[test]
fn l_form_examples() {
    assert_relative_eq!(l_form(&Sym2::IDENTITY, [3.0, 4.0]).unwrap(), 1.0 / 125.0, epsilon = 1e-17);
    assert_relative_eq!(l_form(&Sym2::new(4.0, 0.0, 1.0), [1.0, 0.0]).unwrap(), 0.125, epsilon = 1e-17);
    let v = l_form(&Sym2::new(2.0, 1.0, 2.0), [1.0, 1.0]).unwrap();
    assert_relative_eq!(v, 6f64.powf(-1.5), epsilon = 1e-16);
    assert_relative_eq!(v, 0.0680414, epsilon = 1e-7);
    assert!(matches!(l_form(&Sym2::IDENTITY, [0.0, 0.0]), Err(Error::Singular(_))));
    assert!(l_form(&Sym2::new(1.0, 2.0, 1.0), [1.0, 0.0]).is_err());
}

#[test]
fn r_kernel_examples() {
    assert_relative_eq!(
        r_kernel(Axis::U1, &Sym2::IDENTITY, [3.0, 4.0]).unwrap(),
        3.0 / 125.0,
        epsilon = 1e-17
    );
    assert_eq!(r_kernel(Axis::U2, &Sym2::new(4.0, 0.0, 1.0), [0.0, 1.0]).unwrap(), 1.0);
    assert!(r_kernel(Axis::U2, &Sym2::IDENTITY, [0.0, 0.0]).is_err());
}

#[test]
fn symbol_examples() {
    let s = symbol(&Sym2::IDENTITY, [1.0, 0.0], Axis::U1).unwrap();
    assert_eq!(s, Complex64::new(0.0, -1.0));
    let s = symbol(&Sym2::new(4.0, 0.0, 1.0), [2.0, 0.0], Axis::U1).unwrap();
    assert_relative_eq!(s.re, 0.0);
    assert_relative_eq!(s.im, -0.25, epsilon = 1e-16);
    assert!(matches!(symbol(&Sym2::IDENTITY, [0.0, 0.0], Axis::U1), Err(Error::Singular(_))));
    assert_eq!(symbol_unchecked(&Sym2::IDENTITY, [0.0, 0.0], Axis::U2), Complex64::new(0.0, 0.0));
}

#[test]
fn symbol_matches_the_defining_formula() {
    // -i det(G)^{-1/2} (G⁻¹ξ)_j / √(ξᵀG⁻¹ξ), written out with the inverse.
    let g = Sym2::new(1.7, -0.4, 0.9);
    let inv = g.inverse().unwrap();
    for xi in [[1.0, 0.3], [-0.2, 2.0], [0.5, -0.5]] {
        let v = inv.apply(xi);
        let q = inv.quad(xi);
        for (j, axis) in [(0, Axis::U1), (1, Axis::U2)] {
            let want = -v[j] / (g.det().sqrt() * q.sqrt());
            let got = symbol(&g, xi, axis).unwrap();
            assert_eq!(got.re, 0.0);
            assert_relative_eq!(got.im, want, max_relative = 1e-14);
        }
    }
}

#[test]
fn grid_invariants() {
    let g = PlanarGrid::new(8.0, 256).unwrap();
    assert_eq!(g.spacing() * 256.0, 16.0);
    assert_relative_eq!(g.node(0)[0], -8.0 + 0.5 * g.spacing());
    assert!(PlanarGrid::new(1.0, 7).is_err());
    assert!(PlanarGrid::new(0.0, 8).is_err());
    let w = g.window(0.25).unwrap();
    assert_eq!(w.width(), 64);
    assert!(w.indices().iter().all(|&p| w.contains(p)));
}

#[test]
fn epstein_lattice_constant() {
    // ζ(1/2) and Dirichlet β(1/2) to 20 digits.
    let zeta_half = -1.460_354_508_809_586_812_9;
    let beta_half = 0.667_691_457_189_609_176_7;
    let c = -2.0 * zeta_half * beta_half;
    assert_relative_eq!(FLAT_LATTICE_CONSTANT, c, max_relative = 1e-13);
    let flat = lattice_correction(&Sym2::IDENTITY);
    assert_relative_eq!(flat.g11, c, max_relative = 1e-7);
    assert_relative_eq!(flat.g22, c, max_relative = 1e-7);
    assert!(flat.g12.abs() < 1e-10);
}

#[test]
fn flat_matrix_is_block_toeplitz() {
    let grid = PlanarGrid::new(1.0, 10).unwrap();
    let n = 10i64;
    for rule in [PvRule::Punctured, PvRule::LatticeCorrected] {
        for axis in [Axis::U1, Axis::U2] {
            let a = assemble_riesz(&IdentityMetric, &grid, axis, rule).unwrap();
            let m = &a.matrix;
            for p in 0..grid.len() {
                assert_eq!(m.get(p, p), 0.0);
                for q in 0..grid.len() {
                    let (di, dj) = (p as i64 / n - q as i64 / n, p as i64 % n - q as i64 % n);
                    // Reference entry with the same offset, anchored at the corner.
                    let (ri, rj) = (di.max(0), dj.max(0));
                    let (si, sj) = (ri - di, rj - dj);
                    let pr = (ri * n + rj) as usize;
                    let qr = (si * n + sj) as usize;
                    assert_eq!(m.get(p, q), m.get(pr, qr));
                }
            }
        }
    }
}

#[test]
fn punctured_column_reads_off_the_kernel() {
    let grid = PlanarGrid::new(2.0, 12).unwrap();
    let h2 = grid.spacing() * grid.spacing();
    let q = 5 * 12 + 7;
    let mut e = vec![0.0; grid.len()];
    e[q] = 1.0;
    for axis in [Axis::U1, Axis::U2] {
        let a = assemble_riesz(&IdentityMetric, &grid, axis, PvRule::Punctured).unwrap();
        let col = a.matrix.mul_vec(&e);
        for p in 0..grid.len() {
            if p == q {
                assert_eq!(col[p], 0.0);
                continue;
            }
            let (up, uq) = (grid.node(p), grid.node(q));
            let want = r_kernel(axis, &Sym2::IDENTITY, [up[0] - uq[0], up[1] - uq[1]]).unwrap() * h2 / TAU;
            assert_relative_eq!(col[p], want, max_relative = 1e-13);
        }
        assert_eq!(a.col_weights, vec![h2; grid.len()]);
    }
}

#[test]
fn curved_diagonal_is_zero_and_apply_matches_dense() {
    let field = smooth_field();
    let grid = PlanarGrid::new(2.0, 16).unwrap();
    let f = grid.sample(|u| (-(u[0] - 0.2).powi(2) - 2.0 * u[1] * u[1]).exp() * (1.0 + u[0]));
    for rule in [PvRule::Punctured, PvRule::LatticeCorrected] {
        for axis in [Axis::U1, Axis::U2] {
            let a = assemble_riesz(&field, &grid, axis, rule).unwrap();
            for p in 0..grid.len() {
                assert_eq!(a.matrix.get(p, p), 0.0);
            }
            let dense = a.matrix.mul_vec(&f);
            let free = NystromRiesz::new(&field, grid, axis, rule).unwrap().apply(&f).unwrap();
            for (x, y) in dense.iter().zip(&free) {
                assert!((x - y).abs() <= 1e-14 * (1.0 + x.abs()));
            }
        }
    }
}

#[test]
fn puncture_consistency_on_symmetric_boxes() {
    // The row of u_p summed over the box of offsets symmetric about u_p
    // vanishes by oddness, for flat and frozen curved metrics alike.
    let grid = PlanarGrid::new(2.0, 20).unwrap();
    let n = 20usize;
    let smooth = smooth_field();
    let fields: [&dyn MetricField; 2] = [&IdentityMetric, &smooth];
    for field in fields {
        for rule in [PvRule::Punctured, PvRule::LatticeCorrected] {
            for axis in [Axis::U1, Axis::U2] {
                let a = assemble_riesz(field, &grid, axis, rule).unwrap();
                for pi in 3..n - 3 {
                    for pj in 3..n - 3 {
                        let p = pi * n + pj;
                        let r = pi.min(pj).min(n - 1 - pi).min(n - 1 - pj);
                        let mut sum = 0.0;
                        for qi in pi - r..=pi + r {
                            for qj in pj - r..=pj + r {
                                sum += a.matrix.get(p, qi * n + qj);
                            }
                        }
                        assert!(sum.abs() <= 1e-10, "row {p}: {sum}");
                    }
                }
            }
        }
    }
}

#[test]
fn assembly_errors() {
    let field = smooth_field();
    assert!(matches!(
        NystromRiesz::new(&field, PlanarGrid::new(1.5, 8).unwrap(), Axis::U1, PvRule::default()),
        Err(Error::Config(_))
    ));
    assert!(matches!(
        assemble_riesz(&IdentityMetric, &PlanarGrid::new(1.0, 92).unwrap(), Axis::U1, PvRule::default()),
        Err(Error::Config(_))
    ));
    let op = NystromRiesz::new(&IdentityMetric, PlanarGrid::new(1.0, 8).unwrap(), Axis::U1, PvRule::default())
        .unwrap();
    assert!(op.apply(&[1.0; 3]).is_err());
}

#[test]
fn stencil_is_independent_of_spacing() {
    let g = Sym2::new(1.3, 0.2, 0.8);
    let a = Stencil::new(&g, &PlanarGrid::new(1.0, 8).unwrap(), Axis::U1, PvRule::LatticeCorrected);
    let b = Stencil::new(&g, &PlanarGrid::new(5.0, 8).unwrap(), Axis::U1, PvRule::LatticeCorrected);
    assert_eq!(a, b);
    assert_eq!(a.at(0, 0), 0.0);
    assert_eq!(a.at(2, -1), -a.at(-2, 1));
}

#[test]
fn flat_difference_kernel_vanishes() {
    for (u, w) in [([0.0, 0.0], [0.3, 0.1]), ([0.5, -0.2], [0.45, -0.25])] {
        for pair in [(Axis::U1, Axis::U1), (Axis::U2, Axis::U1)] {
            let k = difference_kernel(&IdentityMetric, u, w, 0.01, 0.02, pair).unwrap();
            assert!(k.value.abs() <= 1e-12);
        }
    }
}

#[test]
fn difference_kernel_preconditions() {
    let field = smooth_field();
    let pair = (Axis::U1, Axis::U2);
    assert!(matches!(
        difference_kernel(&field, [0.1, 0.1], [0.1, 0.1], 0.0, 0.0, pair),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        difference_kernel(&field, [0.0, 0.0], [0.1, 0.0], 0.05, 0.0, pair),
        Err(Error::Domain(_))
    ));
    assert!(difference_kernel(&field, [0.0, 0.0], [0.1, 0.0], -0.01, 0.0, pair).is_err());
}

/// The excluded disks cost `O(δ)`: increments halve with `δ`, and the
/// Richardson extrapolation of the punctured values lands on the `δ = 0`
/// evaluation.
#[test]
fn smooth_difference_kernel_converges_as_punctures_shrink() {
    let field = smooth_field();
    let (u, w) = ([0.1, 0.2], [0.3, -0.1]);
    let pair = (Axis::U1, Axis::U2);
    let vals: Vec<f64> = (0..9)
        .map(|k| {
            let delta = 0.08 * 0.5f64.powi(k);
            difference_kernel(&field, u, w, delta, 0.5 * delta, pair).unwrap().value
        })
        .collect();
    for k in 3..vals.len() - 1 {
        let ratio = (vals[k + 1] - vals[k]) / (vals[k] - vals[k - 1]);
        assert!((0.4..0.6).contains(&ratio), "step {k}: ratio {ratio}");
    }
    let n = vals.len();
    // Successive halvings change the value by at most 1% once δ ≤ 1.25e-3.
    for k in n - 2..n {
        assert!((vals[k] - vals[k - 1]).abs() <= 0.01 * vals[k].abs(), "δ step {k}");
    }
    let extrapolated = 2.0 * vals[n - 1] - vals[n - 2];
    let limit = difference_kernel(&field, u, w, 0.0, 0.0, pair).unwrap();
    assert!((limit.value - extrapolated).abs() <= 1e-4 * limit.value.abs());
    assert!(limit.far_field.abs() <= limit.tail_bound);
}

#[test]
fn holder_difference_kernel_is_weakly_singular() {
    // |k(0, w)|·|w|^{2-β} with β = 3α/4 must not grow as |w| shrinks.
    let field = holder_field();
    let beta = 0.75 * 0.5;
    let (s, c) = 0.7f64.sin_cos();
    let scaled: Vec<f64> = (0..5)
        .map(|k| {
            let d = 0.2 * 0.5f64.powi(k);
            let v = difference_kernel(&field, [0.0, 0.0], [d * c, d * s], 0.0, 0.0, (Axis::U1, Axis::U2))
                .unwrap()
                .value;
            v.abs() * d.powf(2.0 - beta)
        })
        .collect();
    assert!(scaled.iter().all(|v| v.is_finite()), "{scaled:?}");
    assert!(scaled[4] <= 2.0 * scaled[0], "{scaled:?}");
}

proptest! {
    #[test]
    fn kernel_parities(a in 0.5f64..3.0, b in -0.4f64..0.4, c in 0.5f64..3.0, x in -2.0f64..2.0, y in -2.0f64..2.0) {
        prop_assume!(x.hypot(y) > 1e-3);
        let g = Sym2::new(a, b, c);
        prop_assert_eq!(l_form(&g, [x, y]).unwrap(), l_form(&g, [-x, -y]).unwrap());
        for j in [Axis::U1, Axis::U2] {
            prop_assert_eq!(r_kernel(j, &g, [-x, -y]).unwrap(), -r_kernel(j, &g, [x, y]).unwrap());
        }
    }

    #[test]
    fn symbol_is_homogeneous_of_degree_zero(a in 0.5f64..3.0, b in -0.4f64..0.4, c in 0.5f64..3.0,
                                            x in -2.0f64..2.0, y in -2.0f64..2.0, s in 0.01f64..100.0) {
        prop_assume!(x.hypot(y) > 1e-3);
        let g = Sym2::new(a, b, c);
        for j in [Axis::U1, Axis::U2] {
            let p = symbol(&g, [x, y], j).unwrap();
            let q = symbol(&g, [s * x, s * y], j).unwrap();
            prop_assert!((p - q).norm() <= 1e-14 * (1.0 + p.norm()));
        }
    }

    #[test]
    fn lattice_correction_is_homogeneous(a in 0.6f64..2.0, b in -0.3f64..0.3, c in 0.6f64..2.0, s in 0.5f64..2.0) {
        // Q ↦ sQ scales every term of C_jk by s^{-3/2}.
        let g = Sym2::new(a, b, c);
        let gs = Sym2::new(s * a, s * b, s * c);
        let (p, q) = (lattice_correction(&g), lattice_correction(&gs));
        let f = s.powf(-1.5);
        prop_assert!(q.max_abs_diff(&Sym2::new(f * p.g11, f * p.g12, f * p.g22)) <= 1e-12);
    }
}
