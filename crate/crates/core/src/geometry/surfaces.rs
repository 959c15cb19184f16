use crate::error::{Error, Result};
use crate::surface::ClosedSurface;
use crate::Vec3;

use super::chart::{Chart, FlatChart, GraphChart, HeightProfile, Jacobian, PolarChart, Rect};
use super::metric::{extend_metric, ExtendedMetric, GraphMetric, IdentityMetric, MetricField, Sym2};

/// Amplitude of the smooth bump; keeps the metric eigenvalues in `[1, 1.96]`.
pub const SMOOTH_BUMP_AMPLITUDE: f64 = 0.45;
/// Amplitude of the Hölder bump; keeps the metric eigenvalues in `[1, 1.95]`.
pub const HOLDER_BUMP_AMPLITUDE: f64 = 0.35;
/// Half-width of the chart domain used for graph surfaces.
pub const GRAPH_HALF_WIDTH: f64 = 4.0;
/// Extension radius and blend width used for the polar charts.
pub const POLAR_CUTOFF: f64 = 1.0;
pub const POLAR_BLEND: f64 = 0.25;

/// The built-in test surfaces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SurfaceKind {
    Flat,
    GraphBumpSmooth,
    GraphBumpHolder { alpha: f64 },
    UnitSphere,
    Ellipsoid { a: f64, b: f64, c: f64 },
}

impl SurfaceKind {
    pub fn name(&self) -> &'static str {
        match self {
            SurfaceKind::Flat => "flat",
            SurfaceKind::GraphBumpSmooth => "graph_bump_smooth",
            SurfaceKind::GraphBumpHolder { .. } => "graph_bump_holder",
            SurfaceKind::UnitSphere => "unit_sphere",
            SurfaceKind::Ellipsoid { .. } => "ellipsoid",
        }
    }
}

/// Chart of a built-in surface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BuiltinChart {
    Flat(FlatChart),
    Graph(GraphChart),
    Polar(PolarChart),
}

impl Chart for BuiltinChart {
    fn domain(&self) -> Rect {
        match self {
            BuiltinChart::Flat(c) => c.domain(),
            BuiltinChart::Graph(c) => c.domain(),
            BuiltinChart::Polar(c) => c.domain(),
        }
    }
    fn eval(&self, u: [f64; 2]) -> Vec3 {
        match self {
            BuiltinChart::Flat(c) => c.eval(u),
            BuiltinChart::Graph(c) => c.eval(u),
            BuiltinChart::Polar(c) => c.eval(u),
        }
    }
    fn jacobian(&self, u: [f64; 2]) -> Jacobian {
        match self {
            BuiltinChart::Flat(c) => c.jacobian(u),
            BuiltinChart::Graph(c) => c.jacobian(u),
            BuiltinChart::Polar(c) => c.jacobian(u),
        }
    }
    fn holder_exponent(&self) -> f64 {
        match self {
            BuiltinChart::Flat(c) => c.holder_exponent(),
            BuiltinChart::Graph(c) => c.holder_exponent(),
            BuiltinChart::Polar(c) => c.holder_exponent(),
        }
    }
}

/// Planar metric field of a built-in surface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BuiltinMetric {
    Identity(IdentityMetric),
    Graph(GraphMetric),
    Extended(ExtendedMetric<PolarChart>),
}

impl MetricField for BuiltinMetric {
    fn evaluate(&self, u: [f64; 2]) -> Sym2 {
        match self {
            BuiltinMetric::Identity(m) => m.evaluate(u),
            BuiltinMetric::Graph(m) => m.evaluate(u),
            BuiltinMetric::Extended(m) => m.evaluate(u),
        }
    }
    fn support_radius(&self) -> f64 {
        match self {
            BuiltinMetric::Identity(m) => m.support_radius(),
            BuiltinMetric::Graph(m) => m.support_radius(),
            BuiltinMetric::Extended(m) => m.support_radius(),
        }
    }
    fn holder_exponent(&self) -> f64 {
        match self {
            BuiltinMetric::Identity(m) => m.holder_exponent(),
            BuiltinMetric::Graph(m) => m.holder_exponent(),
            BuiltinMetric::Extended(m) => m.holder_exponent(),
        }
    }
}

/// A built-in surface: its chart, and for closed surfaces the global
/// description used by the surface quadrature.
#[derive(Clone, Debug, PartialEq)]
pub struct BuiltinSurface {
    pub kind: SurfaceKind,
    pub chart: BuiltinChart,
    pub closed: Option<ClosedSurface>,
}

impl BuiltinSurface {
    /// The planar metric field the Riesz operators see for this surface.
    pub fn metric_field(&self) -> Result<BuiltinMetric> {
        Ok(match self.chart {
            BuiltinChart::Flat(_) => BuiltinMetric::Identity(IdentityMetric),
            BuiltinChart::Graph(g) => BuiltinMetric::Graph(GraphMetric::new(g.profile)?),
            BuiltinChart::Polar(p) => {
                BuiltinMetric::Extended(extend_metric(&p, POLAR_CUTOFF, POLAR_BLEND)?)
            }
        })
    }
}

/// Construct a built-in surface.
pub fn builtin_surface(kind: SurfaceKind) -> Result<BuiltinSurface> {
    let graph = |profile| {
        BuiltinChart::Graph(GraphChart {
            profile,
            half_width: GRAPH_HALF_WIDTH,
        })
    };
    let (chart, closed) = match kind {
        SurfaceKind::Flat => (
            BuiltinChart::Flat(FlatChart {
                half_width: GRAPH_HALF_WIDTH,
            }),
            None,
        ),
        SurfaceKind::GraphBumpSmooth => (
            graph(HeightProfile::SmoothBump {
                amplitude: SMOOTH_BUMP_AMPLITUDE,
            }),
            None,
        ),
        SurfaceKind::GraphBumpHolder { alpha } => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::Parameter(alloc::format!(
                    "Hölder exponent {alpha} must lie in (0, 1)"
                )));
            }
            (
                graph(HeightProfile::HolderBump {
                    amplitude: HOLDER_BUMP_AMPLITUDE,
                    alpha,
                }),
                None,
            )
        }
        SurfaceKind::UnitSphere => (
            BuiltinChart::Polar(PolarChart::unit_sphere()),
            Some(ClosedSurface::sphere(1.0)?),
        ),
        SurfaceKind::Ellipsoid { a, b, c } => {
            let closed = ClosedSurface::ellipsoid(a, b, c)?;
            (
                BuiltinChart::Polar(PolarChart {
                    axes: [a, b, c],
                    center: [core::f64::consts::FRAC_PI_2, 0.0],
                }),
                Some(closed),
            )
        }
    };
    Ok(BuiltinSurface {
        kind,
        chart,
        closed,
    })
}
