//! The named compactness cases.
//!
//! Each case assembles an operator expression that should be compact (or,
//! for `NONCOMPACT_FACTORS`, should not) together with a non-compact
//! reference from the same build, and records singular-value tail indices
//! over a refinement ladder. Planar cases act on the inner window `W`, where
//! `χ₁ = χ₂ = 1`, so `M̃₁`, `M̃₂` reduce to the identity on rows and columns.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use enp_core::elastic::LameParams;
use enp_core::geometry::{builtin_surface, CutoffPair, SurfaceKind};
use enp_core::riesz::PlanarGrid;
use enp_core::spectra::{DecayLevel, DecayReport};
use enp_core::surface::{ClosedSurface, SurfaceKernel};
use faer::Mat;
use num_complex::Complex64;

use crate::enp::{axisymmetric_pair, dense_operator, FourierBlocks};
use crate::error::{LabError, LabResult};
use crate::linalg::{self, p3_matrix, singular_values};
use crate::planar::{
    br_cube_window, br_matrix, chart_blocks, chart_window_block, gemm, riesz_products,
    PlanarProblem, RieszProducts,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuiteCase {
    RieszCommutator,
    RieszSquaresum,
    FrozenDiff,
    MultCommutator,
    XijCommutators,
    XsqSum,
    BrCube,
    KMinusK0T,
    P3K,
    NoncompactFactors,
}

impl SuiteCase {
    pub const ALL: [SuiteCase; 10] = [
        SuiteCase::RieszCommutator,
        SuiteCase::RieszSquaresum,
        SuiteCase::FrozenDiff,
        SuiteCase::MultCommutator,
        SuiteCase::XijCommutators,
        SuiteCase::XsqSum,
        SuiteCase::BrCube,
        SuiteCase::KMinusK0T,
        SuiteCase::P3K,
        SuiteCase::NoncompactFactors,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteCase::RieszCommutator => "RIESZ_COMMUTATOR",
            SuiteCase::RieszSquaresum => "RIESZ_SQUARESUM",
            SuiteCase::FrozenDiff => "FROZEN_DIFF",
            SuiteCase::MultCommutator => "MULT_COMMUTATOR",
            SuiteCase::XijCommutators => "XIJ_COMMUTATORS",
            SuiteCase::XsqSum => "XSQ_SUM",
            SuiteCase::BrCube => "BR_CUBE",
            SuiteCase::KMinusK0T => "K_MINUS_K0T",
            SuiteCase::P3K => "P3K",
            SuiteCase::NoncompactFactors => "NONCOMPACT_FACTORS",
        }
    }

    /// The claim the case probes.
    pub fn claim(self) -> &'static str {
        match self {
            SuiteCase::RieszCommutator => "M1(R1 R2 - R2 R1)M1 is compact (surface Riesz transforms commute)",
            SuiteCase::RieszSquaresum => "M1[det G (g11 R1^2 + 2 g12 R1 R2 + g22 R2^2) + I]M1 is compact",
            SuiteCase::FrozenDiff => "R1 R2 - R12 is compact (frozen-coefficient composition)",
            SuiteCase::MultCommutator => "[M1 m11, R1] is compact for C^alpha multipliers",
            SuiteCase::XijCommutators => "X12 X13 - X13 X12 is compact",
            SuiteCase::XsqSum => "X12^2 + X13^2 + X23^2 + M1 is compact",
            SuiteCase::BrCube => "R^3 - M1 R is compact for the chart block operator R",
            SuiteCase::KMinusK0T => "K - k0 T is compact (eNP operator against the rotation operator)",
            SuiteCase::P3K => "p3(K) = K(K^2 - k0^2) is compact",
            SuiteCase::NoncompactFactors => "K(K - k0), K(K + k0), K^2 - k0^2 are not compact",
        }
    }

    pub fn is_planar(self) -> bool {
        !matches!(
            self,
            SuiteCase::KMinusK0T | SuiteCase::P3K | SuiteCase::NoncompactFactors
        )
    }

    /// True for cases whose operator should be compact.
    pub fn expects_compact(self) -> bool {
        self != SuiteCase::NoncompactFactors
    }
}

impl fmt::Display for SuiteCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteCase {
    type Err = LabError;
    fn from_str(s: &str) -> LabResult<Self> {
        SuiteCase::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| LabError::Config(format!("unknown suite case `{s}`")))
    }
}

/// All reports a case produces on one surface. Most cases produce one
/// report; `NONCOMPACT_FACTORS` produces one per factor and `K_MINUS_K0T`
/// adds the `K + k0 T` diagnostic after the literal report.
#[derive(Clone, Debug)]
pub struct CaseReport {
    pub case: SuiteCase,
    pub surface: String,
    pub reports: Vec<DecayReport>,
}

/// Planar ladder settings.
#[derive(Clone, Debug)]
pub struct PlanarSettings {
    pub half_width: f64,
    pub ladder: Vec<usize>,
    pub cutoffs: CutoffPair,
    pub window_fraction: f64,
}

fn planar_problem(kind: SurfaceKind, n: usize, s: &PlanarSettings) -> LabResult<PlanarProblem> {
    let surf = builtin_surface(kind)?;
    PlanarProblem::new(
        surf.chart,
        surf.metric_field()?,
        PlanarGrid::new(s.half_width, n)?,
        s.cutoffs,
        s.window_fraction,
    )
}

fn level(n: usize, k: usize, case: &Mat<f64>, reference: &[f64]) -> LabResult<DecayLevel> {
    let sv = singular_values(case.as_ref())?;
    Ok(DecayLevel::new(k, n, sv, reference.to_vec())?)
}

fn combine(a: &Mat<f64>, b: &Mat<f64>, beta: f64) -> Mat<f64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] + beta * b[(i, j)])
}

/// Wall time of a planar sweep: work shared by several cases (operator
/// products, reference spectra) and work owned by one case.
#[derive(Clone, Debug, Default)]
pub struct PlanarTimings {
    pub shared: Duration,
    pub own: Vec<(SuiteCase, Duration)>,
}

impl PlanarTimings {
    fn add_own(&mut self, case: SuiteCase, d: Duration) {
        match self.own.iter_mut().find(|(c, _)| *c == case) {
            Some((_, t)) => *t += d,
            None => self.own.push((case, d)),
        }
    }

    /// Shared time plus the own time of `cases`: what computing only those
    /// cases would have cost.
    pub fn attributed(&self, cases: &[SuiteCase]) -> Duration {
        self.shared
            + self
                .own
                .iter()
                .filter(|(c, _)| cases.contains(c))
                .map(|(_, d)| *d)
                .sum::<Duration>()
    }

    pub fn merge(&mut self, other: &PlanarTimings) {
        self.shared += other.shared;
        for &(c, d) in &other.own {
            self.add_own(c, d);
        }
    }
}

/// Planar operator expressions on the window, one `(case, reference)`
/// pair per entry.
fn planar_level(
    problem: &PlanarProblem,
    cases: &[SuiteCase],
    n: usize,
    k: usize,
    timings: &mut PlanarTimings,
) -> LabResult<Vec<(SuiteCase, String, DecayLevel)>> {
    let mut out = Vec::new();
    let riesz = cases.iter().any(|c| {
        matches!(
            c,
            SuiteCase::RieszCommutator
                | SuiteCase::RieszSquaresum
                | SuiteCase::FrozenDiff
                | SuiteCase::MultCommutator
        )
    });
    if riesz {
        let start = Instant::now();
        let rp = riesz_products(problem)?;
        let sv_ref = singular_values(rp.p[0][1].as_ref())?;
        timings.shared += start.elapsed();
        for &c in cases {
            let start = Instant::now();
            let (m, reference, sv) = match c {
                SuiteCase::RieszCommutator => (
                    combine(&rp.p[0][1], &rp.p[1][0], -1.0),
                    "R1 R2",
                    sv_ref.clone(),
                ),
                SuiteCase::RieszSquaresum => (square_sum(problem, &rp), "R1 R2", sv_ref.clone()),
                SuiteCase::FrozenDiff => (
                    combine(&rp.p[0][1], &rp.frozen12, -1.0),
                    "R1 R2",
                    sv_ref.clone(),
                ),
                SuiteCase::MultCommutator => {
                    let m11: Vec<f64> = rp
                        .window
                        .iter()
                        .map(|&p| Ok(problem.mij(p)?[0][0]))
                        .collect::<LabResult<_>>()?;
                    let nw = m11.len();
                    let a1 = &rp.a[0];
                    let comm = Mat::from_fn(nw, nw, |i, j| (m11[i] - m11[j]) * a1[(i, j)]);
                    let reference = Mat::from_fn(nw, nw, |i, j| m11[i] * a1[(i, j)]);
                    (comm, "M1 m11 R1", singular_values(reference.as_ref())?)
                }
                _ => continue,
            };
            out.push((c, reference.to_string(), level(n, k, &m, &sv)?));
            timings.add_own(c, start.elapsed());
        }
    }
    if cases
        .iter()
        .any(|c| matches!(c, SuiteCase::XijCommutators | SuiteCase::XsqSum))
    {
        let start = Instant::now();
        let cb = chart_blocks(problem)?;
        let prod = |a: usize, b: usize| gemm(cb.left[a].as_ref(), cb.right[b].as_ref());
        let x12x13 = prod(0, 1);
        timings.shared += start.elapsed();
        for &c in cases {
            let start = Instant::now();
            match c {
                SuiteCase::XijCommutators => {
                    let m = combine(&x12x13, &prod(1, 0), -1.0);
                    let sv = singular_values(x12x13.as_ref())?;
                    out.push((c, "X12 X13".into(), level(n, k, &m, &sv)?));
                }
                SuiteCase::XsqSum => {
                    let x13sq = prod(1, 1);
                    let mut m = combine(&prod(0, 0), &x13sq, 1.0);
                    m = combine(&m, &prod(2, 2), 1.0);
                    for i in 0..m.nrows() {
                        m[(i, i)] += 1.0;
                    }
                    let sv = singular_values(x13sq.as_ref())?;
                    out.push((c, "X13^2".into(), level(n, k, &m, &sv)?));
                }
                _ => continue,
            }
            timings.add_own(c, start.elapsed());
        }
    }
    if cases.contains(&SuiteCase::BrCube) {
        let start = Instant::now();
        let (inner, br) = br_matrix(problem)?;
        let (cube, r_ww) = br_cube_window(&inner, &br, &problem.window())?;
        drop(br);
        let m = combine(&cube, &r_ww, -1.0);
        let sv = singular_values(r_ww.as_ref())?;
        out.push((SuiteCase::BrCube, "R (block)".into(), level(n, k, &m, &sv)?));
        timings.add_own(SuiteCase::BrCube, start.elapsed());
    }
    Ok(out)
}

/// `det G (g11 R1² + 2 g12 R1R2 + g22 R2²) + I` on the window.
pub fn square_sum(problem: &PlanarProblem, rp: &RieszProducts) -> Mat<f64> {
    let nw = rp.window.len();
    let coef: Vec<[f64; 3]> = rp
        .window
        .iter()
        .map(|&p| {
            let g = problem.metric(p);
            let d = g.det();
            [d * g.g11, 2.0 * d * g.g12, d * g.g22]
        })
        .collect();
    Mat::from_fn(nw, nw, |i, j| {
        let c = coef[i];
        c[0] * rp.p[0][0][(i, j)]
            + c[1] * rp.p[0][1][(i, j)]
            + c[2] * rp.p[1][1][(i, j)]
            + if i == j { 1.0 } else { 0.0 }
    })
}

/// True for the cases built from the chart operators `X_a`, which need
/// dense blocks over the whole cutoff support and so run on their own ladder.
pub fn uses_chart_ladder(case: SuiteCase) -> bool {
    matches!(
        case,
        SuiteCase::XijCommutators | SuiteCase::XsqSum | SuiteCase::BrCube
    )
}

/// Run the planar cases on one metric. Riesz-product cases use
/// `settings.ladder`, chart-operator cases use `chart_ladder`.
pub fn planar_suite(
    kind: SurfaceKind,
    cases: &[SuiteCase],
    settings: &PlanarSettings,
    chart_ladder: &[usize],
) -> LabResult<Vec<CaseReport>> {
    Ok(planar_suite_timed(kind, cases, settings, chart_ladder)?.0)
}

/// [`planar_suite`] with the wall time split by case.
pub fn planar_suite_timed(
    kind: SurfaceKind,
    cases: &[SuiteCase],
    settings: &PlanarSettings,
    chart_ladder: &[usize],
) -> LabResult<(Vec<CaseReport>, PlanarTimings)> {
    let mut timings = PlanarTimings::default();
    let cases: Vec<SuiteCase> = cases.iter().copied().filter(|c| c.is_planar()).collect();
    let mut sizes: Vec<usize> = settings.ladder.iter().chain(chart_ladder).copied().collect();
    sizes.sort_unstable();
    sizes.dedup();
    let mut reports: Vec<CaseReport> = Vec::new();
    for n in sizes {
        let here: Vec<SuiteCase> = cases
            .iter()
            .copied()
            .filter(|&c| {
                let ladder = if uses_chart_ladder(c) { chart_ladder } else { &settings.ladder };
                ladder.contains(&n)
            })
            .collect();
        if here.is_empty() {
            continue;
        }
        let start = Instant::now();
        let problem = planar_problem(kind, n, settings)?;
        timings.shared += start.elapsed();
        let k_main = settings.ladder.iter().position(|&m| m == n);
        let k_chart = chart_ladder.iter().position(|&m| m == n);
        for (case, reference, mut lvl) in planar_level(&problem, &here, n, 0, &mut timings)? {
            lvl.level = if uses_chart_ladder(case) { k_chart } else { k_main }
                .expect("filtered above");
            push_level(&mut reports, case, kind.name(), case.name(), &reference, lvl);
        }
    }
    // Report in the order the cases were requested.
    reports.sort_by_key(|r| cases.iter().position(|&c| c == r.case));
    Ok((reports, timings))
}

fn push_level(
    reports: &mut Vec<CaseReport>,
    case: SuiteCase,
    surface: &str,
    operator: &str,
    reference: &str,
    lvl: DecayLevel,
) {
    let idx = match reports.iter().position(|r| r.case == case) {
        Some(i) => i,
        None => {
            reports.push(CaseReport {
                case,
                surface: surface.to_string(),
                reports: Vec::new(),
            });
            reports.len() - 1
        }
    };
    let cr = &mut reports[idx];
    match cr.reports.iter_mut().find(|r| r.operator == operator) {
        Some(r) => r.levels.push(lvl),
        None => cr.reports.push(DecayReport {
            operator: operator.to_string(),
            reference: reference.to_string(),
            levels: vec![lvl],
        }),
    }
}

/// `K` and `T` at one resolution, in whichever form the surface allows.
pub enum SurfacePair {
    Blocks { k: FourierBlocks, t: FourierBlocks },
    Dense { k: Mat<f64>, t: Mat<f64> },
}

impl SurfacePair {
    pub fn new(params: &LameParams, surface: &ClosedSurface, n: usize) -> LabResult<Self> {
        if surface.is_axisymmetric() {
            let p = axisymmetric_pair(params, surface, n)?;
            Ok(SurfacePair::Blocks { k: p.k, t: p.t })
        } else {
            let quad = enp_core::surface::surface_quadrature(surface, n)?;
            let k = dense_operator(&SurfaceKernel::Enp(*params), surface, &quad)?;
            let t = dense_operator(&SurfaceKernel::Rotation, surface, &quad)?;
            Ok(SurfacePair::Dense {
                k: linalg::weighted(&k),
                t: linalg::weighted(&t),
            })
        }
    }

    /// Eigenvalues of `f(K, T)`, sorted by real part.
    pub fn eigenvalues_of(&self, expr: SurfaceExpr, k0: f64) -> LabResult<Vec<Complex64>> {
        match self {
            SurfacePair::Blocks { k, t } => blocks_of(k, t, expr, k0).eigenvalues(),
            SurfacePair::Dense { k, t } => linalg::eigenvalues(expr.eval(k, t, k0).as_ref()),
        }
    }

    /// Weighted singular values of `f(K, T)` for an expression given both
    /// blockwise and densely.
    pub fn singular_values_of(&self, expr: SurfaceExpr, k0: f64) -> LabResult<Vec<f64>> {
        match self {
            SurfacePair::Blocks { k, t } => blocks_of(k, t, expr, k0).singular_values(),
            SurfacePair::Dense { k, t } => singular_values(expr.eval(k, t, k0).as_ref()),
        }
    }
}

fn blocks_of(k: &FourierBlocks, t: &FourierBlocks, expr: SurfaceExpr, k0: f64) -> FourierBlocks {
    FourierBlocks {
        n_theta: k.n_theta,
        blocks: k
            .blocks
            .iter()
            .zip(&t.blocks)
            .map(|(kb, tb)| expr.eval(kb, tb, k0))
            .collect(),
    }
}

/// Matrix expressions in `K` and `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceExpr {
    K,
    KMinusK0T,
    KPlusK0T,
    P3,
    KTimesKMinusK0,
    KTimesKPlusK0,
    KSquaredMinusK0Squared,
}

impl SurfaceExpr {
    pub fn label(self) -> &'static str {
        match self {
            SurfaceExpr::K => "K",
            SurfaceExpr::KMinusK0T => "K - k0 T",
            SurfaceExpr::KPlusK0T => "K + k0 T",
            SurfaceExpr::P3 => "K(K^2 - k0^2)",
            SurfaceExpr::KTimesKMinusK0 => "K(K - k0)",
            SurfaceExpr::KTimesKPlusK0 => "K(K + k0)",
            SurfaceExpr::KSquaredMinusK0Squared => "K^2 - k0^2",
        }
    }

    fn eval<T>(self, k: &Mat<T>, t: &Mat<T>, k0: f64) -> Mat<T>
    where
        T: faer::traits::ComplexField + From<f64> + Copy,
    {
        let shift = |m: &Mat<T>, s: f64| {
            let mut out = m.clone();
            for i in 0..out.nrows() {
                out[(i, i)] = out[(i, i)] + T::from(s);
            }
            out
        };
        let axpy = |a: &Mat<T>, b: &Mat<T>, beta: f64| {
            Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] + b[(i, j)] * T::from(beta))
        };
        match self {
            SurfaceExpr::K => k.clone(),
            SurfaceExpr::KMinusK0T => axpy(k, t, -k0),
            SurfaceExpr::KPlusK0T => axpy(k, t, k0),
            SurfaceExpr::P3 => p3_matrix(k.as_ref(), k0),
            SurfaceExpr::KTimesKMinusK0 => k * shift(k, -k0),
            SurfaceExpr::KTimesKPlusK0 => k * shift(k, k0),
            SurfaceExpr::KSquaredMinusK0Squared => shift(&(k * k), -k0 * k0),
        }
    }
}

/// Output of [`surface_suite`].
#[derive(Clone, Debug, Default)]
pub struct SurfaceRun {
    pub reports: Vec<CaseReport>,
    /// `(resolution, eigenvalues of K)` per ladder level, when requested.
    pub k_eigenvalues: Vec<(usize, Vec<Complex64>)>,
    /// Eigenvalues of each case's first operator at the finest level, when
    /// requested.
    pub case_eigenvalues: Vec<(SuiteCase, Vec<Complex64>)>,
}

fn case_exprs(case: SuiteCase) -> &'static [SurfaceExpr] {
    match case {
        SuiteCase::KMinusK0T => &[SurfaceExpr::KMinusK0T, SurfaceExpr::KPlusK0T],
        SuiteCase::P3K => &[SurfaceExpr::P3],
        SuiteCase::NoncompactFactors => &[
            SurfaceExpr::KTimesKMinusK0,
            SurfaceExpr::KTimesKPlusK0,
            SurfaceExpr::KSquaredMinusK0Squared,
        ],
        _ => &[],
    }
}

/// Run the surface cases over a quadrature ladder. The reference of every
/// case is `K` itself.
pub fn surface_suite(
    surface_name: &str,
    surface: &ClosedSurface,
    params: &LameParams,
    cases: &[SuiteCase],
    ladder: &[usize],
) -> LabResult<Vec<CaseReport>> {
    Ok(surface_run(surface_name, surface, params, cases, ladder, false)?.reports)
}

/// [`surface_suite`], optionally collecting eigenvalues as well.
pub fn surface_run(
    surface_name: &str,
    surface: &ClosedSurface,
    params: &LameParams,
    cases: &[SuiteCase],
    ladder: &[usize],
    with_eigenvalues: bool,
) -> LabResult<SurfaceRun> {
    let k0 = params.constants().k0;
    let mut run = SurfaceRun::default();
    let cases: Vec<SuiteCase> = cases.iter().copied().filter(|c| !c.is_planar()).collect();
    for (lvl, &n) in ladder.iter().enumerate() {
        let pair = SurfacePair::new(params, surface, n)?;
        let sv_k = pair.singular_values_of(SurfaceExpr::K, k0)?;
        if with_eigenvalues {
            run.k_eigenvalues.push((n, pair.eigenvalues_of(SurfaceExpr::K, k0)?));
        }
        for &case in &cases {
            for &e in case_exprs(case) {
                let sv = pair.singular_values_of(e, k0)?;
                let l = DecayLevel::new(lvl, n, sv, sv_k.clone())?;
                push_level(&mut run.reports, case, surface_name, e.label(), "K", l);
            }
            if with_eigenvalues && lvl + 1 == ladder.len() {
                let e = case_exprs(case)[0];
                run.case_eigenvalues.push((case, pair.eigenvalues_of(e, k0)?));
            }
        }
    }
    Ok(run)
}

/// Convenience for planar single windows: `X_a` restricted to `W`.
pub fn chart_operator_window(problem: &PlanarProblem, a: usize) -> LabResult<Mat<f64>> {
    chart_window_block(problem, a)
}
