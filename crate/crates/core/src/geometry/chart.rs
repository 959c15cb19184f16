use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::{cross3, norm3, Vec3};

use super::metric::Sym2;

/// 3×2 Jacobian: row `a` holds `(∂1 φ_a, ∂2 φ_a)`.
pub type Jacobian = [[f64; 2]; 3];

/// The six coefficient fields `m_ij`, row `i` holding `(m_i1, m_i2)`.
pub type MijCoefficients = [[f64; 2]; 3];

/// Closed axis-aligned rectangle in chart coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Rect {
    pub fn centered(half_widths: [f64; 2]) -> Self {
        Self {
            lo: [-half_widths[0], -half_widths[1]],
            hi: half_widths,
        }
    }

    pub fn contains(&self, u: [f64; 2]) -> bool {
        u[0] >= self.lo[0] && u[0] <= self.hi[0] && u[1] >= self.lo[1] && u[1] <= self.hi[1]
    }

    /// True when the closed disk of radius `r` about the origin fits inside.
    pub fn contains_disk(&self, r: f64) -> bool {
        -r >= self.lo[0] && r <= self.hi[0] && -r >= self.lo[1] && r <= self.hi[1]
    }
}

/// A parametrization `Φ: D → ℝ³` of a surface patch.
pub trait Chart {
    fn domain(&self) -> Rect;

    /// `Φ(u)` without the domain check.
    fn eval(&self, u: [f64; 2]) -> Vec3;

    /// `DΦ(u)` without the domain check.
    fn jacobian(&self, u: [f64; 2]) -> Jacobian;

    /// Hölder exponent of the induced metric (1 for smooth charts).
    fn holder_exponent(&self) -> f64 {
        1.0
    }

    fn phi(&self, u: [f64; 2]) -> Result<Vec3> {
        check_domain(self, u)?;
        Ok(self.eval(u))
    }

    fn d_phi(&self, u: [f64; 2]) -> Result<Jacobian> {
        check_domain(self, u)?;
        Ok(self.jacobian(u))
    }
}

fn check_domain<C: Chart + ?Sized>(chart: &C, u: [f64; 2]) -> Result<()> {
    if chart.domain().contains(u) {
        Ok(())
    } else {
        Err(Error::OutsideDomain { u1: u[0], u2: u[1] })
    }
}

pub(crate) fn columns(j: &Jacobian) -> (Vec3, Vec3) {
    ([j[0][0], j[1][0], j[2][0]], [j[0][1], j[1][1], j[2][1]])
}

pub(crate) fn metric_of_jacobian(j: &Jacobian) -> Sym2 {
    let (d1, d2) = columns(j);
    Sym2::new(
        crate::dot3(d1, d1),
        crate::dot3(d1, d2),
        crate::dot3(d2, d2),
    )
}

pub(crate) fn mij_of_jacobian(j: &Jacobian) -> MijCoefficients {
    let g = metric_of_jacobian(j);
    // ∂_k φ_a = j[a][k-1]; rows of the result are m_11 … m_32 in order.
    let pair = |a: usize| {
        [
            g.g11 * j[a][1] - g.g12 * j[a][0],
            g.g12 * j[a][1] - g.g22 * j[a][0],
        ]
    };
    let r3 = pair(2);
    let r2 = pair(1);
    let r1 = pair(0);
    [r3, [-r2[0], -r2[1]], r1]
}

/// Induced metric `G = DΦᵀDΦ`.
pub fn metric_from_chart<C: Chart + ?Sized>(chart: &C, u: [f64; 2]) -> Result<Sym2> {
    Ok(metric_of_jacobian(&chart.d_phi(u)?))
}

/// The coefficient fields `m_11 … m_32` at `u`.
pub fn mij_coefficients<C: Chart + ?Sized>(chart: &C, u: [f64; 2]) -> Result<MijCoefficients> {
    Ok(mij_of_jacobian(&chart.d_phi(u)?))
}

/// Area element `|∂1Φ × ∂2Φ|`.
pub fn area_element<C: Chart + ?Sized>(chart: &C, u: [f64; 2]) -> Result<f64> {
    let (d1, d2) = columns(&chart.d_phi(u)?);
    Ok(norm3(cross3(d1, d2)))
}

/// Unit normal `∂1Φ × ∂2Φ / |∂1Φ × ∂2Φ|`.
pub fn unit_normal<C: Chart + ?Sized>(chart: &C, u: [f64; 2]) -> Result<Vec3> {
    let (d1, d2) = columns(&chart.d_phi(u)?);
    let n = cross3(d1, d2);
    let len = norm3(n);
    if len == 0.0 {
        return Err(Error::Singular("degenerate chart Jacobian"));
    }
    Ok([n[0] / len, n[1] / len, n[2] / len])
}

/// `Φ*[f](u) = f(Φ(u))·|∂1Φ × ∂2Φ(u)|` sampled at each of `nodes`.
pub fn pullback<C, F>(chart: &C, nodes: &[[f64; 2]], mut f: F) -> Result<Vec<f64>>
where
    C: Chart + ?Sized,
    F: FnMut(Vec3) -> f64,
{
    nodes
        .iter()
        .map(|&u| Ok(f(chart.phi(u)?) * area_element(chart, u)?))
        .collect()
}

/// `Φ(u) = (u1, u2, 0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlatChart {
    pub half_width: f64,
}

impl Chart for FlatChart {
    fn domain(&self) -> Rect {
        Rect::centered([self.half_width; 2])
    }

    fn eval(&self, u: [f64; 2]) -> Vec3 {
        [u[0], u[1], 0.0]
    }

    fn jacobian(&self, _u: [f64; 2]) -> Jacobian {
        [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]
    }
}

/// Height functions for graph charts `Φ(u) = (u1, u2, h(u))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HeightProfile {
    /// `h(u) = s1 u1 + s2 u2`.
    Plane { slope: [f64; 2] },
    /// `h(u) = c χ(|u|)` with the radius-1 bump `χ(r) = exp(-r²/(1-r²))`.
    SmoothBump { amplitude: f64 },
    /// `h(u) = c χ(|u|) (u1 + |u|^{1+α})`.
    ///
    /// The linear tilt makes `∇h(0) ≠ 0`, so `G = I + ∇h∇hᵀ` picks up the
    /// `|u|^α` term of `∇h` linearly. Without it the metric would only see
    /// `|∇h|² ~ |u|^{2α}` and be twice as regular as intended.
    HolderBump { amplitude: f64, alpha: f64 },
}

/// Radius-1 bump and its radial derivative.
fn bump(r: f64) -> (f64, f64) {
    if r >= 1.0 {
        return (0.0, 0.0);
    }
    let s = 1.0 - r * r;
    let chi = libm::exp(-r * r / s);
    (chi, chi * (-2.0 * r / (s * s)))
}

impl HeightProfile {
    pub fn height(&self, u: [f64; 2]) -> f64 {
        let r = libm::hypot(u[0], u[1]);
        match *self {
            HeightProfile::Plane { slope } => slope[0] * u[0] + slope[1] * u[1],
            HeightProfile::SmoothBump { amplitude } => amplitude * bump(r).0,
            HeightProfile::HolderBump { amplitude, alpha } => {
                amplitude * bump(r).0 * (u[0] + libm::pow(r, 1.0 + alpha))
            }
        }
    }

    pub fn gradient(&self, u: [f64; 2]) -> [f64; 2] {
        let r = libm::hypot(u[0], u[1]);
        match *self {
            HeightProfile::Plane { slope } => slope,
            HeightProfile::SmoothBump { amplitude } => {
                if r == 0.0 || r >= 1.0 {
                    return [0.0, 0.0];
                }
                let d = amplitude * bump(r).1 / r;
                [d * u[0], d * u[1]]
            }
            HeightProfile::HolderBump { amplitude, alpha } => {
                if r >= 1.0 {
                    return [0.0, 0.0];
                }
                if r == 0.0 {
                    return [amplitude, 0.0];
                }
                let (chi, dchi) = bump(r);
                let p = u[0] + libm::pow(r, 1.0 + alpha);
                let radial = dchi * p / r + chi * (1.0 + alpha) * libm::pow(r, alpha - 1.0);
                [
                    amplitude * (radial * u[0] + chi),
                    amplitude * radial * u[1],
                ]
            }
        }
    }

    /// Radius outside which `h ≡ 0` (infinite for planes).
    pub fn support_radius(&self) -> f64 {
        match self {
            HeightProfile::Plane { .. } => f64::INFINITY,
            _ => 1.0,
        }
    }

    pub fn holder_exponent(&self) -> f64 {
        match *self {
            HeightProfile::HolderBump { alpha, .. } => alpha,
            _ => 1.0,
        }
    }
}

/// Graph chart `Φ(u) = (u1, u2, h(u))` on `[-w, w]²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphChart {
    pub profile: HeightProfile,
    pub half_width: f64,
}

impl Chart for GraphChart {
    fn domain(&self) -> Rect {
        Rect::centered([self.half_width; 2])
    }

    fn eval(&self, u: [f64; 2]) -> Vec3 {
        [u[0], u[1], self.profile.height(u)]
    }

    fn jacobian(&self, u: [f64; 2]) -> Jacobian {
        let g = self.profile.gradient(u);
        [[1.0, 0.0], [0.0, 1.0], g]
    }

    fn holder_exponent(&self) -> f64 {
        self.profile.holder_exponent()
    }
}

/// Polar chart of the ellipsoid `x²/a² + y²/b² + z²/c² = 1`,
/// `Φ(θ, φ) = (a sinθ cosφ, b sinθ sinφ, c cosθ)`, with chart coordinates
/// `u = (θ - θ0, φ - φ0)` so that `u = 0` sits at `center = (θ0, φ0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarChart {
    pub axes: [f64; 3],
    pub center: [f64; 2],
}

impl PolarChart {
    /// Distance kept from the coordinate poles and from the azimuthal seam.
    pub const POLE_MARGIN: f64 = 0.05;

    pub fn unit_sphere() -> Self {
        Self {
            axes: [1.0; 3],
            center: [core::f64::consts::FRAC_PI_2, 0.0],
        }
    }
}

impl Chart for PolarChart {
    fn domain(&self) -> Rect {
        use core::f64::consts::PI;
        let m = Self::POLE_MARGIN;
        Rect {
            lo: [m - self.center[0], -PI + m],
            hi: [PI - m - self.center[0], PI - m],
        }
    }

    fn eval(&self, u: [f64; 2]) -> Vec3 {
        let (st, ct) = libm::sincos(self.center[0] + u[0]);
        let (sp, cp) = libm::sincos(self.center[1] + u[1]);
        let [a, b, c] = self.axes;
        [a * st * cp, b * st * sp, c * ct]
    }

    fn jacobian(&self, u: [f64; 2]) -> Jacobian {
        let (st, ct) = libm::sincos(self.center[0] + u[0]);
        let (sp, cp) = libm::sincos(self.center[1] + u[1]);
        let [a, b, c] = self.axes;
        [
            [a * ct * cp, -a * st * sp],
            [b * ct * sp, b * st * cp],
            [-c * st, 0.0],
        ]
    }
}
