use enp_core::elastic::LameParams;
use enp_core::geometry::{CutoffPair, SurfaceKind};
use enp_core::spectra::{match_multisets, sort_by_real};
use enp_core::surface::{surface_quadrature, ClosedSurface, SurfaceKernel};
use enp_lab::enp::{axisymmetric_pair, dense_operator};
use enp_lab::linalg::{eigenvalues, init_sequential, singular_values, weighted};
use enp_lab::report::summarize_case;
use enp_lab::suite::{planar_suite, surface_suite, PlanarSettings, SuiteCase, SurfaceExpr, SurfacePair};

fn lame() -> LameParams {
    LameParams::new(1.0, 1.0).unwrap()
}

fn dense_k_eigs(s: &ClosedSurface, n: usize) -> Vec<num_complex::Complex64> {
    let q = surface_quadrature(s, n).unwrap();
    let k = dense_operator(&SurfaceKernel::Enp(lame()), s, &q).unwrap();
    eigenvalues(weighted(&k).as_ref()).unwrap()
}

#[test]
fn k_spectrum_is_rotation_invariant() {
    init_sequential();
    let e = ClosedSurface::ellipsoid(1.0, 1.3, 0.8).unwrap();
    // Rotation about (1, 1, 1)/√3 by 2π/3 permutes the axes; compose with a
    // rotation about z so the result is not a relabeling.
    let perm = [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
    let (c, s) = (0.6, 0.8);
    let rz = [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]];
    let mut q = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            q[i][j] = (0..3).map(|k| perm[i][k] * rz[k][j]).sum();
        }
    }
    let r = e.rotated(q).unwrap();
    let a = dense_k_eigs(&e, 8);
    let b = dense_k_eigs(&r, 8);
    assert!(match_multisets(&a, &b).unwrap() <= 1e-8);
}

#[test]
fn sphere_spectrum_is_scale_invariant() {
    init_sequential();
    let eigs = |r: f64| {
        let p = axisymmetric_pair(&lame(), &ClosedSurface::sphere(r).unwrap(), 10).unwrap();
        p.k.eigenvalues().unwrap()
    };
    assert!(match_multisets(&eigs(1.0), &eigs(2.0)).unwrap() <= 1e-6);
}

#[test]
fn fourier_blocks_match_dense_assembly() {
    init_sequential();
    for s in [ClosedSurface::sphere(1.0).unwrap(), ClosedSurface::ellipsoid(1.0, 1.0, 0.7).unwrap()] {
        // At N = 8 the dense sphere T carries one spurious singular value
        // of 1.6e-5 that the blocks do not; from N = 12 on the two agree to
        // roundoff.
        let pair = axisymmetric_pair(&lame(), &s, 12).unwrap();
        let q = surface_quadrature(&s, 12).unwrap();
        for (blocks, kernel) in [(&pair.k, SurfaceKernel::Enp(lame())), (&pair.t, SurfaceKernel::Rotation)] {
            let dense = weighted(&dense_operator(&kernel, &s, &q).unwrap());
            let mut a = blocks.eigenvalues().unwrap();
            let mut b = eigenvalues(dense.as_ref()).unwrap();
            sort_by_real(&mut a);
            sort_by_real(&mut b);
            assert!(match_multisets(&a, &b).unwrap() <= 1e-8);
            let sa = blocks.singular_values().unwrap();
            let sb = singular_values(dense.as_ref()).unwrap();
            let err = sa.iter().zip(&sb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(err <= 1e-8 * sb[0], "{err}");
        }
    }
}

#[test]
fn dense_fallback_agrees_with_blocks_on_expressions() {
    init_sequential();
    let s = ClosedSurface::sphere(1.0).unwrap();
    let blocks = SurfacePair::new(&lame(), &s, 8).unwrap();
    assert!(matches!(blocks, SurfacePair::Blocks { .. }));
    let q = surface_quadrature(&s, 8).unwrap();
    let k = weighted(&dense_operator(&SurfaceKernel::Enp(lame()), &s, &q).unwrap());
    let t = weighted(&dense_operator(&SurfaceKernel::Rotation, &s, &q).unwrap());
    let dense = SurfacePair::Dense { k, t };
    let k0 = lame().constants().k0;
    for e in [SurfaceExpr::P3, SurfaceExpr::KPlusK0T, SurfaceExpr::KSquaredMinusK0Squared] {
        let a = blocks.singular_values_of(e, k0).unwrap();
        let b = dense.singular_values_of(e, k0).unwrap();
        let err = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-8 * b[0], "{}: {err}", e.label());
    }
}

/// Compact cases end below their reference already on small ladders.
#[test]
fn compact_surface_cases_fall_below_k() {
    init_sequential();
    let cases = [SuiteCase::P3K, SuiteCase::KMinusK0T];
    for (name, s, ladder) in [
        ("sphere", ClosedSurface::sphere(1.0).unwrap(), vec![8, 12, 16]),
        ("ellipsoid", ClosedSurface::ellipsoid(1.0, 1.2, 0.8).unwrap(), vec![8, 10]),
    ] {
        let reports = surface_suite(name, &s, &lame(), &cases, &ladder).unwrap();
        for cr in &reports {
            let sums = summarize_case(cr);
            // P3K, and the K + k0 T diagnostic of K_MINUS_K0T.
            let op = if cr.case == SuiteCase::P3K { &sums[0] } else { &sums[1] };
            let (fin, reference) = (op.tail.last().unwrap(), op.reference_tail.last().unwrap());
            assert!(fin < reference, "{name} {}: {:?} vs {:?}", op.operator, op.tail, op.reference_tail);
        }
    }
}

#[test]
fn planar_chart_cases_on_small_ladders() {
    init_sequential();
    let settings = PlanarSettings {
        half_width: 2.0,
        ladder: vec![16, 24],
        cutoffs: CutoffPair::new(0.75, 0.85, 0.95).unwrap(),
        window_fraction: 0.25,
    };
    let cases = [
        SuiteCase::XijCommutators,
        SuiteCase::XsqSum,
        SuiteCase::BrCube,
        SuiteCase::MultCommutator,
    ];
    for kind in [SurfaceKind::GraphBumpSmooth, SurfaceKind::GraphBumpHolder { alpha: 0.5 }] {
        let reports = planar_suite(kind, &cases, &settings, &[16, 24]).unwrap();
        assert_eq!(reports.len(), cases.len());
        for cr in &reports {
            for op in summarize_case(cr) {
                assert_eq!(op.resolutions, vec![16, 24]);
                assert!(op.tail.iter().all(|t| (0.0..=1.0).contains(t)));
                assert!(
                    op.tail.last() < op.reference_tail.last(),
                    "{} {}: {:?} vs {:?}",
                    kind.name(),
                    op.case,
                    op.tail,
                    op.reference_tail
                );
            }
        }
    }
}
