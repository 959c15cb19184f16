//! Experiment configuration.
//!
//! A run is described by one TOML file:
//!
//! ```toml
//! name = "sphere-clusters"      # required; names the output directory
//! seed = 7                      # echoed into the summary
//! output_dir = "runs/sphere"    # default: runs/<name>
//! cases = ["P3K", "NONCOMPACT_FACTORS"]
//!
//! [lame]                        # default (1, 1)
//! lambda = 1.0
//! mu = 1.0
//!
//! [planar]                      # needed by the planar cases
//! metrics = ["graph_bump_smooth", "graph_bump_holder"]   # or "flat"
//! holder_alpha = 0.5
//! half_width = 2.0
//! ladder = [32, 64, 128]
//! chart_ladder = [32, 64]       # XIJ_COMMUTATORS, XSQ_SUM, BR_CUBE; default: ladder
//! cutoffs = [0.75, 0.85, 0.95]
//! window_fraction = 0.25
//!
//! [surface]                     # needed by the eNP cases
//! shape = "sphere"              # or "ellipsoid" with `axes`
//! axes = [1.0, 1.0, 1.0]
//! ladder = [16, 24, 32]
//! cluster_radius = 0.05
//!
//! [acceptance]                  # run the acceptance criteria as well
//! criteria = [1, 2, 3, 4, 5, 6, 7, 8]
//! ```
//!
//! Every validation error names the line it comes from.

use std::ops::Range;
use std::path::{Path, PathBuf};

use enp_core::elastic::LameParams;
use enp_core::geometry::{CutoffPair, SurfaceKind};
use enp_core::surface::ClosedSurface;
use serde::Deserialize;
use toml::Spanned;

use crate::error::{LabError, LabResult};
use crate::suite::{PlanarSettings, SuiteCase};

/// Overrides the directory that relative output paths are resolved against.
pub const OUTPUT_ROOT_ENV: &str = "ENP_LAB_OUTPUT_ROOT";

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Spanned<String>,
    #[serde(default)]
    seed: u64,
    output_dir: Option<String>,
    #[serde(default)]
    cases: Vec<Spanned<String>>,
    lame: Option<Spanned<RawLame>>,
    planar: Option<RawPlanar>,
    surface: Option<RawSurface>,
    acceptance: Option<RawAcceptance>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLame {
    lambda: f64,
    mu: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlanar {
    metrics: Vec<Spanned<String>>,
    #[serde(default = "default_alpha")]
    holder_alpha: Spanned<f64>,
    #[serde(default = "default_half_width")]
    half_width: Spanned<f64>,
    ladder: Spanned<Vec<usize>>,
    chart_ladder: Option<Spanned<Vec<usize>>>,
    #[serde(default = "default_cutoffs")]
    cutoffs: Spanned<[f64; 3]>,
    #[serde(default = "default_window")]
    window_fraction: Spanned<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSurface {
    #[serde(default = "default_shape")]
    shape: Spanned<String>,
    axes: Option<Spanned<[f64; 3]>>,
    ladder: Spanned<Vec<usize>>,
    #[serde(default = "default_radius")]
    cluster_radius: Spanned<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAcceptance {
    criteria: Spanned<Vec<u8>>,
}

fn unspanned<T>(v: T) -> Spanned<T> {
    Spanned::new(0..0, v)
}
fn default_alpha() -> Spanned<f64> {
    unspanned(0.5)
}
fn default_half_width() -> Spanned<f64> {
    unspanned(2.0)
}
fn default_cutoffs() -> Spanned<[f64; 3]> {
    unspanned([0.75, 0.85, 0.95])
}
fn default_window() -> Spanned<f64> {
    unspanned(0.25)
}
fn default_shape() -> Spanned<String> {
    unspanned("sphere".into())
}
fn default_radius() -> Spanned<f64> {
    unspanned(0.05)
}

#[derive(Clone, Debug)]
pub struct PlanarConfig {
    pub metrics: Vec<SurfaceKind>,
    pub settings: PlanarSettings,
    pub chart_ladder: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SurfaceConfig {
    pub name: String,
    pub surface: ClosedSurface,
    pub ladder: Vec<usize>,
    pub cluster_radius: f64,
}

/// A validated experiment.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub name: String,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub cases: Vec<SuiteCase>,
    pub lame: LameParams,
    pub planar: Option<PlanarConfig>,
    pub surface: Option<SurfaceConfig>,
    pub criteria: Vec<u8>,
    /// The file as given, echoed into the summary.
    pub source: String,
}

/// Locates spans in the source for error messages.
struct Locator<'a> {
    src: &'a str,
    path: &'a str,
}

impl Locator<'_> {
    fn err(&self, span: Range<usize>, msg: impl std::fmt::Display) -> LabError {
        if span.is_empty() && span.start == 0 {
            return LabError::Config(format!("{}: {msg}", self.path));
        }
        let line = self.src[..span.start.min(self.src.len())].matches('\n').count() + 1;
        LabError::Config(format!("{}:{line}: {msg}", self.path))
    }
}

fn check_ladder(loc: &Locator<'_>, ladder: &Spanned<Vec<usize>>, what: &str) -> LabResult<()> {
    let v = ladder.get_ref();
    if v.is_empty() {
        return Err(loc.err(ladder.span(), format!("{what} is empty")));
    }
    if v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(loc.err(ladder.span(), format!("{what} must be strictly increasing")));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> LabResult<Self> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&src, &path.display().to_string())
    }

    /// Parse and validate; `origin` labels error messages.
    pub fn parse(src: &str, origin: &str) -> LabResult<Self> {
        let loc = Locator { src, path: origin };
        let raw: RawConfig = toml::from_str(src).map_err(|e| {
            let span = e.span().unwrap_or(0..0);
            loc.err(span, e.message())
        })?;

        let name = raw.name.get_ref().trim().to_string();
        if name.is_empty() || name.contains(['/', '\\']) {
            return Err(loc.err(raw.name.span(), "name must be non-empty and contain no path separators"));
        }

        let mut cases = Vec::new();
        for c in &raw.cases {
            let case: SuiteCase = c
                .get_ref()
                .parse()
                .map_err(|_| loc.err(c.span(), format!("unknown suite case `{}`", c.get_ref())))?;
            if !cases.contains(&case) {
                cases.push(case);
            }
        }

        let lame = match &raw.lame {
            Some(l) => {
                let v = l.get_ref();
                LameParams::new(v.lambda, v.mu).map_err(|e| loc.err(l.span(), e))?
            }
            None => LameParams::new(1.0, 1.0)?,
        };

        let planar = raw.planar.as_ref().map(|p| planar_config(&loc, p)).transpose()?;
        let surface = raw
            .surface
            .as_ref()
            .map(|s| surface_config(&loc, s, &lame))
            .transpose()?;

        if cases.iter().any(|c| c.is_planar()) && planar.is_none() {
            return Err(loc.err(0..0, "planar cases requested but there is no [planar] section"));
        }
        if cases.iter().any(|c| !c.is_planar()) && surface.is_none() {
            return Err(loc.err(0..0, "surface cases requested but there is no [surface] section"));
        }

        let criteria = match &raw.acceptance {
            Some(a) => {
                let v = a.criteria.get_ref().clone();
                if let Some(bad) = v.iter().find(|&&c| !(1..=8).contains(&c)) {
                    return Err(loc.err(a.criteria.span(), format!("no acceptance criterion {bad}")));
                }
                v
            }
            None => Vec::new(),
        };
        if cases.is_empty() && criteria.is_empty() {
            return Err(loc.err(0..0, "nothing to run: no cases and no acceptance criteria"));
        }

        let output_dir = match &raw.output_dir {
            Some(d) => PathBuf::from(d),
            None => Path::new("runs").join(&name),
        };
        Ok(Self {
            name,
            seed: raw.seed,
            output_dir,
            cases,
            lame,
            planar,
            surface,
            criteria,
            source: src.to_string(),
        })
    }

    /// Output directory after applying [`OUTPUT_ROOT_ENV`].
    pub fn resolved_output_dir(&self) -> PathBuf {
        match std::env::var_os(OUTPUT_ROOT_ENV) {
            Some(root) if self.output_dir.is_relative() => Path::new(&root).join(&self.output_dir),
            _ => self.output_dir.clone(),
        }
    }
}

fn planar_config(loc: &Locator<'_>, p: &RawPlanar) -> LabResult<PlanarConfig> {
    check_ladder(loc, &p.ladder, "planar ladder")?;
    if let Some(cl) = &p.chart_ladder {
        check_ladder(loc, cl, "planar chart_ladder")?;
    }
    for l in std::iter::once(&p.ladder).chain(&p.chart_ladder) {
        if l.get_ref().iter().any(|n| n % 2 != 0 || *n < 8) {
            return Err(loc.err(l.span(), "planar grid sizes must be even and at least 8"));
        }
    }
    let alpha = *p.holder_alpha.get_ref();
    let mut metrics = Vec::new();
    for m in &p.metrics {
        let kind = match m.get_ref().as_str() {
            "flat" => SurfaceKind::Flat,
            "graph_bump_smooth" => SurfaceKind::GraphBumpSmooth,
            "graph_bump_holder" => {
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(loc.err(p.holder_alpha.span(), "holder_alpha must lie in (0, 1)"));
                }
                SurfaceKind::GraphBumpHolder { alpha }
            }
            other => {
                return Err(loc.err(
                    m.span(),
                    format!("unknown planar metric `{other}` (flat, graph_bump_smooth, graph_bump_holder)"),
                ))
            }
        };
        metrics.push(kind);
    }
    if metrics.is_empty() {
        return Err(loc.err(0..0, "[planar] lists no metrics"));
    }
    let half_width = *p.half_width.get_ref();
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(loc.err(p.half_width.span(), "half_width must be positive"));
    }
    let [r1, r2, r3] = *p.cutoffs.get_ref();
    let cutoffs = CutoffPair::new(r1, r2, r3).map_err(|e| loc.err(p.cutoffs.span(), e))?;
    let window_fraction = *p.window_fraction.get_ref();
    if !(window_fraction > 0.0 && window_fraction <= 1.0) {
        return Err(loc.err(p.window_fraction.span(), "window_fraction must lie in (0, 1]"));
    }
    let ladder = p.ladder.get_ref().clone();
    Ok(PlanarConfig {
        metrics,
        chart_ladder: p
            .chart_ladder
            .as_ref()
            .map_or_else(|| ladder.clone(), |l| l.get_ref().clone()),
        settings: PlanarSettings {
            half_width,
            ladder,
            cutoffs,
            window_fraction,
        },
    })
}

fn surface_config(loc: &Locator<'_>, s: &RawSurface, lame: &LameParams) -> LabResult<SurfaceConfig> {
    check_ladder(loc, &s.ladder, "surface ladder")?;
    if s.ladder.get_ref().iter().any(|&n| n < 2) {
        return Err(loc.err(s.ladder.span(), "surface resolutions must be at least 2"));
    }
    let axes = s.axes.as_ref().map(|a| (*a.get_ref(), a.span()));
    let (name, surface) = match s.shape.get_ref().as_str() {
        "sphere" => {
            let r = match axes {
                Some(([a, b, c], span)) if !(a == b && b == c) => {
                    return Err(loc.err(span, "a sphere needs three equal axes"))
                }
                Some(([a, _, _], _)) => a,
                None => 1.0,
            };
            ("sphere", ClosedSurface::sphere(r).map_err(|e| loc.err(s.shape.span(), e))?)
        }
        "ellipsoid" => {
            let Some(([a, b, c], span)) = axes else {
                return Err(loc.err(s.shape.span(), "an ellipsoid needs `axes`"));
            };
            ("ellipsoid", ClosedSurface::ellipsoid(a, b, c).map_err(|e| loc.err(span, e))?)
        }
        other => {
            return Err(loc.err(s.shape.span(), format!("unknown shape `{other}` (sphere, ellipsoid)")))
        }
    };
    let k0 = lame.constants().k0;
    let radius = *s.cluster_radius.get_ref();
    if !(radius > 0.0 && radius < 0.5 * k0) {
        return Err(loc.err(
            s.cluster_radius.span(),
            format!("cluster_radius {radius} must lie in (0, k0/2) with k0 = {k0}"),
        ));
    }
    Ok(SurfaceConfig {
        name: name.to_string(),
        surface,
        ladder: s.ladder.get_ref().clone(),
        cluster_radius: radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "name = \"t\"\ncases = [\"P3K\"]\n[surface]\nladder = [4, 6]\n";

    #[test]
    fn minimal_defaults() {
        let c = ExperimentConfig::parse(MINIMAL, "t.toml").unwrap();
        assert_eq!(c.cases, vec![SuiteCase::P3K]);
        assert_eq!(c.output_dir, Path::new("runs/t"));
        let s = c.surface.unwrap();
        assert_eq!(s.cluster_radius, 0.05);
        assert!(s.surface.is_axisymmetric());
    }

    #[test]
    fn errors_carry_lines() {
        let src = "name = \"t\"\ncases = [\"P3K\"]\n[surface]\nladder = [6, 4]\n";
        let e = ExperimentConfig::parse(src, "t.toml").unwrap_err().to_string();
        assert!(e.contains("t.toml:4:"), "{e}");
        let src = "name = \"t\"\ncases = [\"P3K\", \"NOPE\"]\n";
        let e = ExperimentConfig::parse(src, "t.toml").unwrap_err().to_string();
        assert!(e.contains("t.toml:2:") && e.contains("NOPE"), "{e}");
    }
}
