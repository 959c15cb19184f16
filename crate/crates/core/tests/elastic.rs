use std::f64::consts::PI;

use approx::assert_relative_eq;
use enp_core::elastic::*;
use enp_core::{Error, Mat3, Vec3};
use proptest::prelude::*;

fn p(l: f64, m: f64) -> LameParams {
    LameParams::new(l, m).unwrap()
}

fn add(a: Vec3, b: Vec3, s: f64) -> Vec3 {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

fn e(k: usize) -> Vec3 {
    let mut v = [0.0; 3];
    v[k] = 1.0;
    v
}

fn max_abs(m: &Mat3) -> f64 {
    m.iter().flatten().fold(0.0f64, |a, &b| a.max(b.abs()))
}

/// `∂_k Γ_ij(x)` by central differences of [`kelvin`].
fn fd_gradient(params: &LameParams, x: Vec3, h: f64) -> [Mat3; 3] {
    let mut out = [[[0.0; 3]; 3]; 3];
    for (k, dk) in out.iter_mut().enumerate() {
        let gp = kelvin(params, add(x, e(k), h)).unwrap();
        let gm = kelvin(params, add(x, e(k), -h)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                dk[i][j] = (gp[i][j] - gm[i][j]) / (2.0 * h);
            }
        }
    }
    out
}

/// Traction of `Γ(x - y) e_b` at `x` from a finite-difference gradient.
fn fd_traction(params: &LameParams, x: Vec3, y: Vec3, n: Vec3) -> Mat3 {
    let d = add(x, y, -1.0);
    let grad = fd_gradient(params, d, 1e-6);
    let (l, m) = (params.lambda(), params.mu());
    let mut out = [[0.0; 3]; 3];
    for b in 0..3 {
        // ∂_k u_i with u = Γ e_b.
        let du = |i: usize, k: usize| grad[k][i][b];
        let div = (0..3).map(|k| du(k, k)).sum::<f64>();
        for i in 0..3 {
            let strain_n = (0..3).map(|k| (du(i, k) + du(k, i)) * n[k]).sum::<f64>();
            out[i][b] = l * div * n[i] + m * strain_n;
        }
    }
    out
}

#[test]
fn constants_examples() {
    let c = p(1.0, 1.0).constants();
    assert_relative_eq!(c.alpha1, 2.0 / 3.0, epsilon = 1e-15);
    assert_relative_eq!(c.alpha2, 1.0 / 3.0, epsilon = 1e-15);
    assert_relative_eq!(c.k0, 1.0 / 6.0, epsilon = 1e-15);
    let c = p(0.0, 1.0).constants();
    assert_relative_eq!(c.alpha1, 0.75, epsilon = 1e-15);
    assert_relative_eq!(c.alpha2, 0.25, epsilon = 1e-15);
    assert_relative_eq!(c.k0, 0.25, epsilon = 1e-15);
    assert_relative_eq!(p(2.0, 3.0).constants().k0, 3.0 / 16.0, epsilon = 1e-15);
}

#[test]
fn lame_validation() {
    assert!(matches!(LameParams::new(1.0, 0.0), Err(Error::Parameter(_))));
    assert!(LameParams::new(-1.0, 1.0).is_err());
    assert!(LameParams::new(f64::NAN, 1.0).is_err());
    assert!(LameParams::new(2e6, 1.0).is_err());
    // 3λ + 2μ > 0 admits slightly negative λ.
    assert!(LameParams::new(-0.5, 1.0).is_ok());
}

#[test]
fn kelvin_examples() {
    let g = kelvin(&p(1.0, 1.0), [1.0, 0.0, 0.0]).unwrap();
    assert_relative_eq!(g[0][0], -1.0 / (4.0 * PI), epsilon = 1e-15);
    assert_relative_eq!(g[0][0], -0.0795775, epsilon = 1e-7);
    assert_relative_eq!(g[1][1], -1.0 / (6.0 * PI), epsilon = 1e-15);
    assert_relative_eq!(g[1][1], -0.0530516, epsilon = 1e-7);
    assert_eq!(g[0][1], 0.0);
    let g = kelvin(&p(1.0, 1.0), [0.0, 0.0, 2.0]).unwrap();
    assert_relative_eq!(g[2][2], -1.0 / (8.0 * PI), epsilon = 1e-15);
    assert!(matches!(
        kelvin(&p(1.0, 1.0), [0.0; 3]),
        Err(Error::Singular(_))
    ));
}

#[test]
fn kelvin_gradient_matches_finite_differences() {
    let params = p(2.0, 3.0);
    for x in [[0.3, -0.7, 0.5], [1.0, 0.2, 0.1], [-0.4, -0.4, 0.9]] {
        let g = kelvin_gradient(&params, x).unwrap();
        let fd = fd_gradient(&params, x, 1e-5);
        for k in 0..3 {
            let scale = max_abs(&g[k]).max(1e-3);
            for i in 0..3 {
                for j in 0..3 {
                    assert!((g[k][i][j] - fd[k][i][j]).abs() < 1e-7 * scale);
                }
            }
        }
    }
}

#[test]
fn kelvin_solves_the_lame_system() {
    // μ Δ(Γ e_b) + (λ + μ) ∇∇·(Γ e_b) = 0 away from the origin, with second
    // differences of Γ itself.
    let h = 1e-3;
    let points = [
        [0.5, 0.2, -0.3],
        [1.0, 1.0, 0.0],
        [-0.7, 0.1, 0.9],
        [0.0, 0.0, 1.5],
        [0.2, -1.1, 0.4],
        [0.9, -0.6, -0.8],
        [-1.3, 0.5, 0.2],
        [0.35, 0.35, 0.35],
        [-0.2, -0.9, -0.6],
        [1.4, -0.1, 0.7],
    ];
    for (params, x) in [p(1.0, 1.0), p(0.0, 1.0), p(2.0, 3.0)]
        .into_iter()
        .flat_map(|q| points.into_iter().map(move |x| (q, x)))
    {
        let (l, m) = (params.lambda(), params.mu());
        let g = |y: Vec3| kelvin(&params, y).unwrap();
        let d2 = |i: usize, k: usize| -> Mat3 {
            let f = |si: f64, sk: f64| g(add(add(x, e(i), si * h), e(k), sk * h));
            let (a, b, c, dd) = (f(1.0, 1.0), f(1.0, -1.0), f(-1.0, 1.0), f(-1.0, -1.0));
            let mut out = [[0.0; 3]; 3];
            for r in 0..3 {
                for s in 0..3 {
                    out[r][s] = (a[r][s] - b[r][s] - c[r][s] + dd[r][s]) / (4.0 * h * h);
                }
            }
            out
        };
        let hess: Vec<Vec<Mat3>> = (0..3).map(|i| (0..3).map(|k| d2(i, k)).collect()).collect();
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let scale = 1.0 / (r * r * r);
        for b in 0..3 {
            for i in 0..3 {
                let lap = (0..3).map(|k| hess[k][k][i][b]).sum::<f64>();
                let grad_div = (0..3).map(|k| hess[i][k][k][b]).sum::<f64>();
                let res = m * lap + (l + m) * grad_div;
                assert!(res.abs() <= 1e-4 * scale, "residual {res} at {x:?}");
            }
        }
    }
}

#[test]
fn enp_kernel_matches_finite_difference_conormal() {
    let cases = [
        (p(1.0, 1.0), [1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]),
        (p(1.0, 1.0), [0.4, -0.3, 0.8], [-0.2, 0.1, 0.1], [0.6, 0.0, 0.8]),
        (p(2.0, 3.0), [0.0, 1.0, 0.5], [0.3, 0.2, -0.4], [0.0, 0.6, -0.8]),
        (p(0.0, 1.0), [1.0, 1.0, 1.0], [0.0, 0.5, 0.0], [1.0, 0.0, 0.0]),
    ];
    for (params, x, y, n) in cases {
        let k = enp_kernel(&params, x, y, n).unwrap();
        let fd = fd_traction(&params, x, y, n);
        let scale = max_abs(&fd);
        for i in 0..3 {
            for b in 0..3 {
                assert!(
                    (k[i][b] - fd[i][b]).abs() <= 1e-5 * scale,
                    "({i},{b}): {} vs {}",
                    k[i][b],
                    fd[i][b]
                );
            }
        }
    }
}

#[test]
fn enp_kernel_scaling_example() {
    let params = p(1.0, 1.0);
    let n = [0.0, 0.6, 0.8];
    let a = enp_kernel(&params, [0.3, 0.1, 0.2], [0.0; 3], n).unwrap();
    let b = enp_kernel(&params, [0.6, 0.2, 0.4], [0.0; 3], n).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert_relative_eq!(b[i][j], a[i][j] / 4.0, max_relative = 1e-14);
        }
    }
}

#[test]
fn enp_kernel_antisymmetric_part_is_minus_k0_k1() {
    let params = p(1.0, 1.0);
    let k0 = params.constants().k0;
    let (x, y, n) = ([0.4, -0.3, 0.8], [-0.2, 0.1, 0.1], [0.6, 0.0, 0.8]);
    let k = enp_kernel(&params, x, y, n).unwrap();
    let k1 = k1_kernel(x, y, n).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let anti = 0.5 * (k[i][j] - k[j][i]);
            assert!((anti + k0 * k1[i][j]).abs() < 1e-14);
        }
    }
}

#[test]
fn kernel_errors() {
    let params = p(1.0, 1.0);
    let x = [0.1, 0.2, 0.3];
    assert!(matches!(enp_kernel(&params, x, x, [0.0, 0.0, 1.0]), Err(Error::Singular(_))));
    assert!(matches!(k1_kernel(x, x, [0.0, 0.0, 1.0]), Err(Error::Singular(_))));
    assert!(matches!(enp_kernel(&params, x, [0.0; 3], [0.0, 0.0, 2.0]), Err(Error::Domain(_))));
}

#[test]
fn k1_examples() {
    let k = k1_kernel([1.0, 0.0, 0.0], [0.0; 3], [0.0, 0.0, 1.0]).unwrap();
    let c = 1.0 / (2.0 * PI);
    assert_relative_eq!(k[2][0], c, epsilon = 1e-16);
    assert_relative_eq!(k[0][2], -c, epsilon = 1e-16);
    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2)] {
        assert_eq!(k[i][j], 0.0);
    }
    let n = [0.6, 0.0, 0.8];
    let k = k1_kernel([1.2, 0.0, 1.6], [0.0; 3], n).unwrap();
    assert!(max_abs(&k) < 1e-17);
}

fn unit(v: Vec3) -> Vec3 {
    let l = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    [v[0] / l, v[1] / l, v[2] / l]
}

fn vec3() -> impl Strategy<Value = Vec3> {
    [-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn k1_is_antisymmetric_and_odd(x in vec3(), y in vec3(), n in vec3()) {
        prop_assume!((0..3).map(|k| (x[k] - y[k]).powi(2)).sum::<f64>() > 1e-4);
        prop_assume!(n.iter().map(|v| v * v).sum::<f64>() > 1e-4);
        let n = unit(n);
        let k = k1_kernel(x, y, n).unwrap();
        // (x - y) ↦ -(x - y) with n fixed: swap the roles of x and y.
        let odd = k1_kernel(y, x, n).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                prop_assert_eq!(k[i][j] + k[j][i], 0.0);
                prop_assert_eq!(odd[i][j], -k[i][j]);
            }
        }
    }

    #[test]
    fn kelvin_is_symmetric_and_homogeneous(x in vec3(), l in 0.0f64..5.0, m in 0.1f64..5.0) {
        prop_assume!(x.iter().map(|v| v * v).sum::<f64>() > 1e-4);
        let params = p(l, m);
        let g = kelvin(&params, x).unwrap();
        let g2 = kelvin(&params, [2.0 * x[0], 2.0 * x[1], 2.0 * x[2]]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                prop_assert_eq!(g[i][j], g[j][i]);
                prop_assert!((g2[i][j] - 0.5 * g[i][j]).abs() <= 1e-15 * max_abs(&g));
            }
        }
    }

    #[test]
    fn enp_kernel_is_homogeneous(d in vec3(), n in vec3(), s in 0.05f64..20.0, l in -0.5f64..5.0, m in 0.1f64..5.0) {
        prop_assume!(d.iter().map(|v| v * v).sum::<f64>() > 1e-4);
        prop_assume!(n.iter().map(|v| v * v).sum::<f64>() > 1e-4);
        let params = p(l, m);
        let n = unit(n);
        let a = enp_kernel(&params, d, [0.0; 3], n).unwrap();
        let b = enp_kernel(&params, [s * d[0], s * d[1], s * d[2]], [0.0; 3], n).unwrap();
        let scale = max_abs(&a);
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((b[i][j] * s * s - a[i][j]).abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn constant_relations(l in 0.0f64..50.0, m in 0.01f64..50.0) {
        let c = p(l, m).constants();
        // α₁ - α₂ = 1/(2μ + λ), so k₀ = μ(α₁ - α₂)/2.
        prop_assert!((c.k0 - 0.5 * m * (c.alpha1 - c.alpha2)).abs() <= 1e-14 * c.k0);
        prop_assert!(c.alpha1 > c.alpha2 && c.alpha2 >= 0.0);
        if l > 0.0 {
            prop_assert!(c.k0 > 0.0 && c.k0 < 0.25);
        }
    }
}
