//! Real orthonormal spherical harmonics of degree `< L`, evaluated from a
//! unit vector with the standard normalized associated-Legendre recurrences.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::Vec3;

/// Evaluator for the `L²` real harmonics of degree `< L`.
///
/// Ordering: degree `l` ascending, then `m = 0, 1, -1, 2, -2, …`, where
/// positive `m` carries `cos mφ` and negative `m` carries `sin |m|φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealHarmonics {
    l: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl RealHarmonics {
    pub fn new(l: usize) -> Self {
        let mut a = vec![0.0; l * l];
        let mut b = vec![0.0; l * l];
        for deg in 0..l {
            for m in 0..deg.saturating_sub(1) {
                let (lf, mf) = (deg as f64, m as f64);
                a[deg * l + m] = libm::sqrt((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf));
                let l1 = lf - 1.0;
                b[deg * l + m] = libm::sqrt((l1 * l1 - mf * mf) / (4.0 * l1 * l1 - 1.0));
            }
        }
        Self { l, a, b }
    }

    pub fn degree_bound(&self) -> usize {
        self.l
    }

    pub fn count(&self) -> usize {
        self.l * self.l
    }

    /// Position of `(l, m)` in the output ordering.
    pub fn index(l: usize, m: i64) -> usize {
        let base = l * l;
        if m == 0 {
            base
        } else if m > 0 {
            base + 2 * m as usize - 1
        } else {
            base + 2 * (-m) as usize
        }
    }

    /// Evaluate all harmonics at the unit vector `s` into `out`
    /// (length [`count`](Self::count)).
    pub fn eval(&self, s: Vec3, out: &mut [f64]) {
        let l = self.l;
        if l == 0 {
            return;
        }
        let ct = s[2];
        let st = libm::hypot(s[0], s[1]);
        let (cp, sp) = if st > 0.0 { (s[0] / st, s[1] / st) } else { (1.0, 0.0) };
        // pmm = P̄_m^m, walked along the diagonal.
        let mut pmm = libm::sqrt(1.0 / (4.0 * PI));
        let (mut cm, mut sm) = (1.0, 0.0);
        for m in 0..l {
            if m > 0 {
                let mf = m as f64;
                pmm *= -libm::sqrt((2.0 * mf + 1.0) / (2.0 * mf)) * st;
                let c = cm * cp - sm * sp;
                sm = sm * cp + cm * sp;
                cm = c;
            }
            let (fc, fs) = if m == 0 {
                (1.0, 0.0)
            } else {
                (core::f64::consts::SQRT_2 * cm, core::f64::consts::SQRT_2 * sm)
            };
            let mut put = |deg: usize, p: f64| {
                if m == 0 {
                    out[Self::index(deg, 0)] = p;
                } else {
                    out[Self::index(deg, m as i64)] = p * fc;
                    out[Self::index(deg, -(m as i64))] = p * fs;
                }
            };
            put(m, pmm);
            if m + 1 < l {
                let mut p_prev = pmm;
                let mut p = libm::sqrt(2.0 * m as f64 + 3.0) * ct * pmm;
                put(m + 1, p);
                for deg in m + 2..l {
                    let next =
                        self.a[deg * l + m] * (ct * p - self.b[deg * l + m] * p_prev);
                    p_prev = p;
                    p = next;
                    put(deg, p);
                }
            }
        }
    }
}
