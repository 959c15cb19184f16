//! Charts, induced metrics, metric extension to the whole plane, cutoff
//! pairs and the `m_ij` coefficient fields.
//!
//! Chart coordinates are `u = (u1, u2)`. A [`MetricField`] is a symmetric
//! positive-definite 2×2 field on the whole plane that equals the identity
//! outside a disk; it is what the planar Riesz operators consume.

mod chart;
mod cutoff;
mod metric;
mod surfaces;

pub use chart::{
    area_element, metric_from_chart, mij_coefficients, pullback, unit_normal, Chart, FlatChart,
    GraphChart, HeightProfile, Jacobian, MijCoefficients, PolarChart, Rect,
};
pub use cutoff::{smoothstep5, CutoffPair};
pub use metric::{
    extend_metric, fit_holder_exponent, loglog_slope, ExtendedMetric, GraphMetric,
    IdentityMetric, MetricField, Sym2,
};
pub use surfaces::{builtin_surface, BuiltinChart, BuiltinMetric, BuiltinSurface, SurfaceKind};
