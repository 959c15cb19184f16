use enp_core::geometry::{builtin_surface, CutoffPair, MetricField, SurfaceKind, Sym2};
use enp_core::riesz::{assemble_riesz, Axis, PlanarGrid, PvRule, Stencil};
use enp_core::spectra::{p3, DecayLevel};
use enp_lab::fourier::{flat_multiplier_apply, relative_l2, stencil_apply};
use enp_lab::linalg::{eigenvalues, p3_matrix, singular_values};
use enp_lab::planar::{chart_window_block, riesz_products, PlanarProblem};
use enp_lab::suite::square_sum;
use faer::Mat;
use num_complex::Complex64;
use proptest::prelude::*;

fn bump(u: [f64; 2]) -> f64 {
    (-(u[0] - 0.2).powi(2) * 3.0 - (u[1] + 0.1).powi(2) * 2.0).exp() * (1.0 + u[0])
}

#[test]
fn flat_multiplier_identities() {
    let grid = PlanarGrid::new(2.0, 32).unwrap();
    let zero = flat_multiplier_apply(&grid, &vec![0.0; 1024], Axis::U1, 1).unwrap();
    assert!(zero.iter().all(|&v| v == 0.0));

    let f = grid.sample(bump);
    let r = |g: &[f64], a| flat_multiplier_apply(&grid, g, a, 1).unwrap();
    let r12 = r(&r(&f, Axis::U2), Axis::U1);
    let r21 = r(&r(&f, Axis::U1), Axis::U2);
    assert!(relative_l2(&r12, &r21, None) < 1e-13);

    // R1² + R2² = -I away from the mean, for input with no content near
    // the Nyquist lines.
    let grid = PlanarGrid::new(2.0, 64).unwrap();
    let f = grid.sample(|u| (-8.0 * ((u[0] - 0.2).powi(2) + (u[1] + 0.1).powi(2))).exp());
    let r = |g: &[f64], a| flat_multiplier_apply(&grid, g, a, 1).unwrap();
    let mean = f.iter().sum::<f64>() / f.len() as f64;
    let sq: Vec<f64> = r(&r(&f, Axis::U1), Axis::U1)
        .iter()
        .zip(r(&r(&f, Axis::U2), Axis::U2))
        .map(|(a, b)| a + b)
        .collect();
    let want: Vec<f64> = f.iter().map(|v| -(v - mean)).collect();
    assert!(relative_l2(&sq, &want, None) < 1e-10);

    assert!(flat_multiplier_apply(&grid, &f[1..], Axis::U1, 1).is_err());
    assert!(flat_multiplier_apply(&grid, &f, Axis::U1, 0).is_err());
}

/// A constant metric; its support radius is irrelevant on one grid.
struct Constant(Sym2);

impl MetricField for Constant {
    fn evaluate(&self, _u: [f64; 2]) -> Sym2 {
        self.0
    }
    fn support_radius(&self) -> f64 {
        0.0
    }
    fn holder_exponent(&self) -> f64 {
        1.0
    }
}

#[test]
fn stencil_convolution_matches_dense_apply() {
    let grid = PlanarGrid::new(1.0, 16).unwrap();
    let g = Sym2::new(1.3, 0.2, 0.9);
    let f = grid.sample(bump);
    for rule in [PvRule::Punctured, PvRule::LatticeCorrected] {
        for axis in Axis::BOTH {
            let field = Constant(g);
            let dense = assemble_riesz(&field, &grid, axis, rule).unwrap();
            let want = dense.matrix.mul_vec(&f);
            let got = stencil_apply(&Stencil::new(&g, &grid, axis, rule), &f).unwrap();
            assert!(relative_l2(&got, &want, None) < 1e-12);
        }
    }
}

#[test]
fn eigenvalue_examples() {
    let id = Mat::<f64>::identity(5, 5);
    let e = eigenvalues(id.as_ref()).unwrap();
    assert!(e.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-14));
    let rot = Mat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => 1.0,
        (1, 0) => -1.0,
        _ => 0.0,
    });
    let mut e = eigenvalues(rot.as_ref()).unwrap();
    e.sort_by(|a, b| a.im.total_cmp(&b.im));
    assert!((e[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
    assert!((e[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    assert!(eigenvalues(Mat::<f64>::zeros(2, 3).as_ref()).is_err());
    let mut bad = Mat::<f64>::zeros(2, 2);
    bad[(0, 0)] = f64::NAN;
    assert!(eigenvalues(bad.as_ref()).is_err());
}

#[test]
fn p3_examples() {
    let k0 = 0.25;
    let a = Mat::<f64>::identity(3, 3) * faer::Scale(k0);
    assert!(p3_matrix(a.as_ref(), k0).norm_max() < 1e-16);
    let d = Mat::from_fn(3, 3, |i, j| if i == j { [0.5, -0.25, 0.1][i] } else { 0.0 });
    let p = p3_matrix(d.as_ref(), k0);
    for i in 0..3 {
        assert!((p[(i, i)] - p3(d[(i, i)], k0)).abs() < 1e-16);
    }
}

/// A toy "eNP" matrix with eigenvalues clustering at 0 and ±k0: the tails
/// of p3 of it follow the sorted |p3| profile of its eigenvalues.
#[test]
fn p3_of_a_clustered_toy_matrix() {
    let k0 = 0.2;
    let n = 60;
    let eig: Vec<f64> = (0..n)
        .map(|i| {
            let c = [0.0, k0, -k0][i % 3];
            c + 0.3 / (1.0 + i as f64)
        })
        .collect();
    let d = Mat::from_fn(n, n, |i, j| if i == j { eig[i] } else { 0.0 });
    let sv = singular_values(p3_matrix(d.as_ref(), k0).as_ref()).unwrap();
    let mut want: Vec<f64> = eig.iter().map(|&t| p3(t, k0).abs()).collect();
    want.sort_by(|a, b| b.total_cmp(a));
    for (a, b) in sv.iter().zip(&want) {
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn decay_level_matches_direct_svd() {
    let a = Mat::from_fn(40, 40, |i, j| 1.0 / (1.0 + i as f64 + 2.0 * j as f64));
    let r = Mat::from_fn(40, 40, |i, j| if i == j { 1.0 } else { 0.0 });
    let sv = singular_values(a.as_ref()).unwrap();
    let lvl = DecayLevel::new(0, 40, sv.clone(), singular_values(r.as_ref()).unwrap()).unwrap();
    // Direct: σ_⌈0.1·40⌉ = σ_4 over max(σ1, 1).
    let t = lvl.tail_at(0.1).unwrap();
    assert!((t - sv[3] / sv[0].max(1.0)).abs() < 1e-8);
    assert_eq!(lvl.reference_tail_at(0.1), Some(1.0 / sv[0].max(1.0)));
}

fn problem(kind: SurfaceKind, n: usize) -> PlanarProblem {
    let s = builtin_surface(kind).unwrap();
    PlanarProblem::new(
        s.chart,
        s.metric_field().unwrap(),
        PlanarGrid::new(2.0, n).unwrap(),
        CutoffPair::new(0.75, 0.85, 0.95).unwrap(),
        0.25,
    )
    .unwrap()
}

#[test]
fn flat_chart_blocks() {
    let p = problem(SurfaceKind::Flat, 32);
    let x12 = chart_window_block(&p, 0).unwrap();
    assert!(x12.norm_max() == 0.0);
    let rp = riesz_products(&p).unwrap();
    for (a, j) in [(1, 0), (2, 1)] {
        let x = chart_window_block(&p, a).unwrap();
        let d = &x + &rp.a[j];
        assert!(d.norm_max() < 1e-15, "X{a}: {}", d.norm_max());
    }
}

#[test]
fn flat_products_are_exact() {
    let p = problem(SurfaceKind::Flat, 32);
    let rp = riesz_products(&p).unwrap();
    assert!((&rp.p[0][1] - &rp.p[1][0]).norm_max() < 1e-15);
    assert!((&rp.p[0][1] - &rp.frozen12).norm_max() < 1e-15);
    // The flat symbols vanish at ξ = 0 and on both Nyquist lines, so
    // R1² + R2² + I is the projection Q onto those modes:
    // Q(p - q) = (1/N²) Σ_{k ∈ Z} cos(2π k·(p - q)/N).
    let sq = square_sum(&p, &rp);
    let n = p.grid.n_per_side();
    let modes: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| (a == 0 && b == 0) || a == n / 2 || b == n / 2)
        .collect();
    let win = p.window();
    let q = |x: usize, y: usize| {
        let (di, dj) = ((x / n) as f64 - (y / n) as f64, (x % n) as f64 - (y % n) as f64);
        modes
            .iter()
            .map(|&(a, b)| (std::f64::consts::TAU * (a as f64 * di + b as f64 * dj) / n as f64).cos())
            .sum::<f64>()
            / (n * n) as f64
    };
    let mut err: f64 = 0.0;
    for (i, &x) in win.iter().enumerate() {
        for (j, &y) in win.iter().enumerate() {
            err = err.max((sq[(i, j)] - q(x, y)).abs());
        }
    }
    assert!(err < 1e-13, "{err}");
}

#[test]
fn frozen_composition_is_symmetric() {
    let p = problem(SurfaceKind::GraphBumpSmooth, 32);
    let rp = riesz_products(&p).unwrap();
    // The frozen symbol -b1 b2 is symmetric in (1, 2) by construction; the
    // products themselves are not.
    assert!((&rp.p[0][1] - &rp.p[1][0]).norm_max() > 1e-6);
    let flat = problem(SurfaceKind::Flat, 32);
    let rf = riesz_products(&flat).unwrap();
    assert!((&rf.frozen12 - &rf.frozen12.transpose()).norm_max() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Eigenvalues of p3(A) are p3 of the eigenvalues of A.
    #[test]
    fn p3_spectral_mapping(vals in prop::collection::vec(-1.0f64..1.0, 2..8), k0 in 0.05f64..0.45) {
        let n = vals.len();
        // Upper triangular with the given diagonal.
        let a = Mat::from_fn(n, n, |i, j| if i == j { vals[i] } else if j > i { 0.3 / (1 + i + j) as f64 } else { 0.0 });
        let got = eigenvalues(p3_matrix(a.as_ref(), k0).as_ref()).unwrap();
        let want: Vec<Complex64> = vals.iter().map(|&t| Complex64::new(p3(t, k0), 0.0)).collect();
        let err = enp_core::spectra::match_multisets(&got, &want).unwrap();
        prop_assert!(err <= 1e-10, "{err}");
    }
}
