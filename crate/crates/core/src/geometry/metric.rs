use alloc::format;

use crate::error::{Error, Result};

use super::chart::{metric_of_jacobian, Chart, HeightProfile};
use super::cutoff::smoothstep5;

/// Symmetric 2×2 matrix `[[g11, g12], [g12, g22]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sym2 {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}

impl Sym2 {
    pub const IDENTITY: Sym2 = Sym2 {
        g11: 1.0,
        g12: 0.0,
        g22: 1.0,
    };

    pub const fn new(g11: f64, g12: f64, g22: f64) -> Self {
        Self { g11, g12, g22 }
    }

    pub fn det(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }

    /// Cofactor inverse: `g^11 = g22/det`, `g^12 = -g12/det`, `g^22 = g11/det`.
    pub fn inverse(&self) -> Option<Sym2> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(Sym2::new(self.g22 / d, -self.g12 / d, self.g11 / d))
    }

    pub fn is_positive_definite(&self) -> bool {
        self.g11 > 0.0 && self.det() > 0.0
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.g11 + self.g22);
        let half_gap = libm::hypot(0.5 * (self.g11 - self.g22), self.g12);
        (mean - half_gap, mean + half_gap)
    }

    /// `⟨w, G w⟩`.
    pub fn quad(&self, w: [f64; 2]) -> f64 {
        self.g11 * w[0] * w[0] + 2.0 * self.g12 * w[0] * w[1] + self.g22 * w[1] * w[1]
    }

    pub fn apply(&self, w: [f64; 2]) -> [f64; 2] {
        [
            self.g11 * w[0] + self.g12 * w[1],
            self.g12 * w[0] + self.g22 * w[1],
        ]
    }

    pub fn lerp(&self, other: &Sym2, t: f64) -> Sym2 {
        Sym2::new(
            self.g11 + t * (other.g11 - self.g11),
            self.g12 + t * (other.g12 - self.g12),
            self.g22 + t * (other.g22 - self.g22),
        )
    }

    /// Largest entrywise deviation.
    pub fn max_abs_diff(&self, other: &Sym2) -> f64 {
        (self.g11 - other.g11)
            .abs()
            .max((self.g12 - other.g12).abs())
            .max((self.g22 - other.g22).abs())
    }

    pub fn is_identity(&self) -> bool {
        *self == Sym2::IDENTITY
    }
}

/// A C^α SPD metric on ℝ² equal to the identity outside a disk.
pub trait MetricField: Send + Sync {
    fn evaluate(&self, u: [f64; 2]) -> Sym2;

    /// `G(u) = I` exactly for `|u| ≥ support_radius`.
    fn support_radius(&self) -> f64;

    fn holder_exponent(&self) -> f64;
}

impl<M: MetricField + ?Sized> MetricField for &M {
    fn evaluate(&self, u: [f64; 2]) -> Sym2 {
        (**self).evaluate(u)
    }
    fn support_radius(&self) -> f64 {
        (**self).support_radius()
    }
    fn holder_exponent(&self) -> f64 {
        (**self).holder_exponent()
    }
}

/// The flat metric.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct IdentityMetric;

impl MetricField for IdentityMetric {
    fn evaluate(&self, _u: [f64; 2]) -> Sym2 {
        Sym2::IDENTITY
    }
    fn support_radius(&self) -> f64 {
        0.0
    }
    fn holder_exponent(&self) -> f64 {
        1.0
    }
}

/// Induced metric `I + ∇h∇hᵀ` of a compactly supported graph; already the
/// identity outside the bump, so no blending is needed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphMetric {
    pub profile: HeightProfile,
}

impl GraphMetric {
    pub fn new(profile: HeightProfile) -> Result<Self> {
        if !profile.support_radius().is_finite() {
            return Err(Error::Parameter(
                "graph metric needs a compactly supported height".into(),
            ));
        }
        Ok(Self { profile })
    }
}

impl MetricField for GraphMetric {
    fn evaluate(&self, u: [f64; 2]) -> Sym2 {
        if libm::hypot(u[0], u[1]) >= self.profile.support_radius() {
            return Sym2::IDENTITY;
        }
        let g = self.profile.gradient(u);
        Sym2::new(1.0 + g[0] * g[0], g[0] * g[1], 1.0 + g[1] * g[1])
    }
    fn support_radius(&self) -> f64 {
        self.profile.support_radius()
    }
    fn holder_exponent(&self) -> f64 {
        self.profile.holder_exponent()
    }
}

/// Chart metric near the chart origin, blended radially into the identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtendedMetric<C> {
    chart: C,
    inner: f64,
    outer: f64,
}

impl<C: Chart> ExtendedMetric<C> {
    pub fn chart(&self) -> &C {
        &self.chart
    }

    /// Radius up to which the field is the untouched chart metric.
    pub fn inner_radius(&self) -> f64 {
        self.inner
    }
}

impl<C: Chart + Send + Sync> MetricField for ExtendedMetric<C> {
    fn evaluate(&self, u: [f64; 2]) -> Sym2 {
        let r = libm::hypot(u[0], u[1]);
        if r >= self.outer {
            return Sym2::IDENTITY;
        }
        let g = metric_of_jacobian(&self.chart.jacobian(u));
        if r <= self.inner {
            return g;
        }
        g.lerp(&Sym2::IDENTITY, smoothstep5((r - self.inner) / (self.outer - self.inner)))
    }
    fn support_radius(&self) -> f64 {
        self.outer
    }
    fn holder_exponent(&self) -> f64 {
        self.chart.holder_exponent()
    }
}

/// Extend the chart metric to ℝ²: untouched for `|u| ≤ r(1-δ)`, identity for
/// `|u| ≥ r`, quintic-smoothstep blend in between. The blend is a convex
/// combination and so stays SPD whenever the chart metric is; a sampled scan
/// of the blend annulus confirms this and reports the first failure.
pub fn extend_metric<C: Chart + Clone + Send + Sync>(
    chart: &C,
    cutoff_radius: f64,
    delta_blend: f64,
) -> Result<ExtendedMetric<C>> {
    if !(cutoff_radius > 0.0) || !chart.domain().contains_disk(cutoff_radius) {
        return Err(Error::Config(format!(
            "cutoff radius {cutoff_radius} does not fit inside the chart domain"
        )));
    }
    if !(delta_blend > 0.0 && delta_blend < 1.0) {
        return Err(Error::Parameter(format!(
            "blend width {delta_blend} must lie in (0, 1)"
        )));
    }
    let field = ExtendedMetric {
        chart: chart.clone(),
        inner: cutoff_radius * (1.0 - delta_blend),
        outer: cutoff_radius,
    };
    const RINGS: usize = 16;
    const RAYS: usize = 64;
    for i in 0..=RINGS {
        let r = field.inner + (field.outer - field.inner) * i as f64 / RINGS as f64;
        for k in 0..RAYS {
            let (s, c) = libm::sincos(core::f64::consts::TAU * k as f64 / RAYS as f64);
            let u = [r * c, r * s];
            if !field.evaluate(u).is_positive_definite() {
                return Err(Error::NotPositiveDefinite { u1: u[0], u2: u[1] });
            }
        }
    }
    Ok(field)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Parameter("slope fit needs two or more points".into()));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return Err(Error::Domain("slope fit needs positive data".into()));
    }
    let n = xs.len() as f64;
    let lx = xs.iter().map(|&x| libm::log(x));
    let ly = ys.iter().map(|&y| libm::log(y));
    let mx = lx.clone().sum::<f64>() / n;
    let my = ly.clone().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in lx.zip(ly) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    Ok(sxy / sxx)
}

/// Fitted Hölder exponent of `field` at `center`: the log–log slope of
/// `max_dir max_ij |g_ij(center + r d) - g_ij(center)|` over `radii`.
pub fn fit_holder_exponent<M: MetricField + ?Sized>(
    field: &M,
    center: [f64; 2],
    radii: &[f64],
) -> Result<f64> {
    const DIRECTIONS: usize = 16;
    let g0 = field.evaluate(center);
    let mut devs = alloc::vec::Vec::with_capacity(radii.len());
    for &r in radii {
        let mut worst = 0.0f64;
        for k in 0..DIRECTIONS {
            let (s, c) = libm::sincos(core::f64::consts::TAU * k as f64 / DIRECTIONS as f64);
            let g = field.evaluate([center[0] + r * c, center[1] + r * s]);
            worst = worst.max(g.max_abs_diff(&g0));
        }
        devs.push(worst);
    }
    loglog_slope(radii, &devs)
}
