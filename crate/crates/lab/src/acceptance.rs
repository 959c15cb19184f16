//! The eight acceptance criteria.
//!
//! Each criterion is a list of [`Check`]s at the stated tolerances; it passes
//! when every check does. Diagnostics that help read a failure are attached
//! as notes and never gate. Criteria 3 and 4 share one planar run, and 5 and 8
//! share one sphere run; [`Acceptance`] caches both.

use std::time::{Duration, Instant};

use enp_core::elastic::{constants, kelvin, LameParams};
use enp_core::geometry::{builtin_surface, CutoffPair, Sym2, SurfaceKind};
use enp_core::geometry::loglog_slope;
use enp_core::riesz::{difference_kernel, Axis, PlanarGrid, PvRule, Stencil};
use enp_core::spectra::{
    cluster_report, is_strictly_decreasing, match_multisets, p3_complex, DecayReport,
    SpectrumReport,
};
use enp_core::surface::{surface_quadrature, ClosedSurface, SurfaceKernel};
use num_complex::Complex64;

use crate::enp::{axisymmetric_pair, dense_operator, p3_apply};
use crate::error::LabResult;
use crate::fourier::{flat_multiplier_apply, relative_l2, stencil_apply};
use crate::linalg::{eigenvalues, weighted};
use crate::planar::{br_matrix, PlanarProblem};
use crate::suite::{
    planar_suite_timed, surface_suite, CaseReport, PlanarSettings, PlanarTimings, SuiteCase,
};

/// Tail quantile every trend criterion uses.
pub const TAIL_Q: f64 = 0.1;

/// One gated comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(label: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            pass,
            detail: detail.into(),
        }
    }

    fn at_most(label: &str, value: f64, bound: f64) -> Self {
        Self::new(label, value <= bound, format!("{value:.4e} <= {bound:.1e}"))
    }

    fn runtime(elapsed: Duration, limit_s: u64) -> Self {
        Self::new(
            "runtime",
            elapsed <= Duration::from_secs(limit_s),
            format!("{:.1} s <= {limit_s} s", elapsed.as_secs_f64()),
        )
    }
}

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    /// Ungated diagnostics.
    pub notes: Vec<String>,
    pub elapsed: Duration,
    pub reports: Vec<CaseReport>,
    /// Named eigenvalue lists for CSV output.
    pub spectra: Vec<(String, Vec<Complex64>)>,
}

impl CriterionOutcome {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// `PASS criterion 3: ...` with the failing checks named.
    pub fn line(&self) -> String {
        let failed: Vec<&str> = self
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.label.as_str())
            .collect();
        let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "{verdict} criterion {}: {} ({} checks, {:.1} s)",
            self.id,
            self.title,
            self.checks.len(),
            self.elapsed.as_secs_f64()
        );
        if !failed.is_empty() {
            s += &format!(" failed: {}", failed.join("; "));
        }
        s
    }
}

pub fn title(id: u8) -> &'static str {
    match id {
        1 => "flat Nystrom operators against the Fourier multiplier",
        2 => "closed-form elastic constants",
        3 => "Riesz commutator and square-sum remainders decay on curved metrics",
        4 => "frozen-coefficient remainder decays; difference kernel is weakly singular",
        5 => "p3(K) decays while its factors do not",
        6 => "sphere eigenvalues cluster at 0 and +-k0",
        7 => "structural exactness",
        8 => "K - k0 T decays relative to K",
        _ => "unknown criterion",
    }
}

const PLANAR_LADDER: [usize; 3] = [64, 128, 256];
const SPHERE_LADDER: [usize; 3] = [16, 24, 32];
const CLUSTER_RADIUS: f64 = 0.05;

fn planar_metrics() -> [SurfaceKind; 2] {
    [
        SurfaceKind::GraphBumpSmooth,
        SurfaceKind::GraphBumpHolder { alpha: 0.5 },
    ]
}

fn planar_settings() -> PlanarSettings {
    PlanarSettings {
        half_width: 2.0,
        ladder: PLANAR_LADDER.to_vec(),
        cutoffs: CutoffPair::new(0.75, 0.85, 0.95).expect("valid radii"),
        window_fraction: 0.25,
    }
}

/// Runs criteria, caching the shared planar and sphere sweeps.
#[derive(Default)]
pub struct Acceptance {
    planar: Option<(Vec<CaseReport>, Duration, PlanarTimings)>,
    sphere: Option<(Vec<CaseReport>, Duration)>,
}

impl Acceptance {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn run(&mut self, id: u8) -> LabResult<CriterionOutcome> {
        let start = Instant::now();
        let mut out = CriterionOutcome {
            id,
            title: title(id),
            checks: Vec::new(),
            notes: Vec::new(),
            elapsed: Duration::ZERO,
            reports: Vec::new(),
            spectra: Vec::new(),
        };
        match id {
            1 => criterion_flat(&mut out)?,
            2 => criterion_constants(&mut out)?,
            3 => self.criterion_riesz(&mut out)?,
            4 => self.criterion_frozen(&mut out)?,
            5 => self.criterion_p3(&mut out)?,
            6 => criterion_clusters(&mut out)?,
            7 => criterion_structure(&mut out)?,
            8 => self.criterion_k_t(&mut out)?,
            _ => {
                return Err(crate::LabError::Config(format!(
                    "no acceptance criterion {id}"
                )))
            }
        }
        out.elapsed = start.elapsed();
        Ok(out)
    }

    fn planar_run(&mut self) -> LabResult<&(Vec<CaseReport>, Duration, PlanarTimings)> {
        if self.planar.is_none() {
            let start = Instant::now();
            let cases = [
                SuiteCase::RieszCommutator,
                SuiteCase::RieszSquaresum,
                SuiteCase::FrozenDiff,
            ];
            let settings = planar_settings();
            let mut reports = Vec::new();
            let mut timings = PlanarTimings::default();
            for kind in planar_metrics() {
                let (r, t) = planar_suite_timed(kind, &cases, &settings, &[])?;
                reports.extend(r);
                timings.merge(&t);
            }
            self.planar = Some((reports, start.elapsed(), timings));
        }
        Ok(self.planar.as_ref().expect("just filled"))
    }

    fn sphere_run(&mut self) -> LabResult<&(Vec<CaseReport>, Duration)> {
        if self.sphere.is_none() {
            let start = Instant::now();
            let reports = surface_suite(
                "sphere",
                &ClosedSurface::sphere(1.0)?,
                &LameParams::new(1.0, 1.0)?,
                &[
                    SuiteCase::KMinusK0T,
                    SuiteCase::P3K,
                    SuiteCase::NoncompactFactors,
                ],
                &SPHERE_LADDER,
            )?;
            self.sphere = Some((reports, start.elapsed()));
        }
        Ok(self.sphere.as_ref().expect("just filled"))
    }

    fn criterion_riesz(&mut self, out: &mut CriterionOutcome) -> LabResult<()> {
        let (reports, total, timings) = self.planar_run()?.clone();
        let own = [SuiteCase::RieszCommutator, SuiteCase::RieszSquaresum];
        let elapsed = timings.attributed(&own);
        for cr in &reports {
            if !own.contains(&cr.case) {
                continue;
            }
            let rep = &cr.reports[0];
            trend_checks(out, &format!("{} {}", cr.surface, cr.case), rep, 0.25);
            out.reports.push(cr.clone());
        }
        out.checks.push(Check::runtime(elapsed, 600));
        out.notes.push(format!(
            "runtime counts the products and reference spectra plus both cases' own work; \
             the sweep it shares with FROZEN_DIFF took {:.1} s in total",
            total.as_secs_f64()
        ));
        Ok(())
    }

    fn criterion_frozen(&mut self, out: &mut CriterionOutcome) -> LabResult<()> {
        let (reports, _, _) = self.planar_run()?.clone();
        for cr in reports.iter().filter(|r| r.case == SuiteCase::FrozenDiff) {
            let series = cr.reports[0].tail_series(TAIL_Q).unwrap_or_default();
            out.checks.push(Check::new(
                format!("{} FROZEN_DIFF decreasing", cr.surface),
                is_strictly_decreasing(&series),
                fmt_series(&series),
            ));
            out.reports.push(cr.clone());
        }
        difference_kernel_checks(out)
    }

    fn criterion_p3(&mut self, out: &mut CriterionOutcome) -> LabResult<()> {
        let (reports, elapsed) = self.sphere_run()?.clone();
        for cr in &reports {
            match cr.case {
                SuiteCase::P3K => {
                    let s = cr.reports[0].tail_series(TAIL_Q).unwrap_or_default();
                    out.checks.push(Check::new(
                        "P3K decreasing",
                        is_strictly_decreasing(&s),
                        fmt_series(&s),
                    ));
                }
                SuiteCase::NoncompactFactors => {
                    for rep in &cr.reports {
                        let s = rep.tail_series(TAIL_Q).unwrap_or_default();
                        let (first, last) = (s[0], s[s.len() - 1]);
                        out.checks.push(Check::new(
                            format!("{} stays", rep.operator),
                            last >= 0.2 * first,
                            format!("{} (finest >= 0.2 x coarsest = {:.4e})", fmt_series(&s), 0.2 * first),
                        ));
                    }
                }
                _ => continue,
            }
            out.reports.push(cr.clone());
        }
        out.checks.push(Check::runtime(elapsed, 900));
        Ok(())
    }

    fn criterion_k_t(&mut self, out: &mut CriterionOutcome) -> LabResult<()> {
        let (reports, _) = self.sphere_run()?.clone();
        let cr = reports
            .iter()
            .find(|r| r.case == SuiteCase::KMinusK0T)
            .expect("requested above");
        trend_checks(out, "K - k0 T", &cr.reports[0], 0.25);
        if let Some(plus) = cr.reports.get(1) {
            let s = plus.tail_series(TAIL_Q).unwrap_or_default();
            let r = plus.finest().map_or(f64::NAN, |l| l.reference_tail[1]);
            out.notes.push(format!(
                "diagnostic {}: tail {} against K {:.4e}; with the Kelvin sign fixed by the \
                 conormal, the antisymmetric part of the kernel is -k0 K1, so this is the \
                 combination that decays",
                plus.operator,
                fmt_series(&s),
                r
            ));
        }
        out.reports.push(cr.clone());
        Ok(())
    }
}

fn fmt_series(s: &[f64]) -> String {
    let parts: Vec<String> = s.iter().map(|x| format!("{x:.4e}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Strictly decreasing tail series, and finest tail at most `ratio` times the
/// reference tail.
fn trend_checks(out: &mut CriterionOutcome, label: &str, rep: &DecayReport, ratio: f64) {
    let s = rep.tail_series(TAIL_Q).unwrap_or_default();
    out.checks.push(Check::new(
        format!("{label} decreasing"),
        is_strictly_decreasing(&s),
        fmt_series(&s),
    ));
    let fin = rep.finest().expect("non-empty ladder");
    let (t, r) = (fin.tail[1], fin.reference_tail[1]);
    out.checks.push(Check::new(
        format!("{label} below {ratio} x {}", rep.reference),
        t <= ratio * r,
        format!("{t:.4e} <= {ratio} x {r:.4e}"),
    ));
}

fn criterion_flat(out: &mut CriterionOutcome) -> LabResult<()> {
    let start = Instant::now();
    let r = flat_identities(8.0, 256)?;
    out.checks.push(Check::at_most("R1 against multiplier", r.r1, 0.02));
    out.checks.push(Check::at_most("R2 against multiplier", r.r2, 0.02));
    out.checks.push(Check::at_most("R1R2 - R2R1 (inner half)", r.commutator, 0.02));
    out.checks.push(Check::at_most("R1^2 + R2^2 + I (inner half)", r.square_sum, 0.02));
    out.checks.push(Check::runtime(start.elapsed(), 60));
    out.notes.push(format!(
        "square sum: first-order estimate of the part of R_k(R_k f) lost to truncating the \
         plane at the grid edge is {:.4e} relative",
        r.truncation_estimate
    ));
    let wide = flat_identities(16.0, 512)?;
    out.notes.push(format!(
        "square sum on a grid of twice the width at the same spacing: {:.4e} (the error is \
         truncation, not quadrature)",
        wide.square_sum
    ));
    Ok(())
}

/// Flat-metric errors on a centred Gaussian.
#[derive(Clone, Copy, Debug)]
pub struct FlatIdentities {
    pub r1: f64,
    pub r2: f64,
    pub commutator: f64,
    pub square_sum: f64,
    pub truncation_estimate: f64,
}

/// Oracle zero padding factor for the multiplier comparison.
pub const ORACLE_PAD: usize = 4;

/// The criterion-1 comparisons on `[-s, s]²` with `n` nodes per side. The
/// identities are measured on the inner half `[-4, 4]²` (the Gaussian's
/// support in double precision) relative to `‖f‖` there.
pub fn flat_identities(s: f64, n: usize) -> LabResult<FlatIdentities> {
    let grid = PlanarGrid::new(s, n)?;
    let f = grid.sample(|u| (-(u[0] * u[0] + u[1] * u[1])).exp());
    let inner: Vec<usize> = (0..grid.len())
        .filter(|&p| {
            let u = grid.node(p);
            u[0].abs() < 4.0 && u[1].abs() < 4.0
        })
        .collect();
    let rule = PvRule::LatticeCorrected;
    let s1 = Stencil::new(&Sym2::IDENTITY, &grid, Axis::U1, rule);
    let s2 = Stencil::new(&Sym2::IDENTITY, &grid, Axis::U2, rule);
    let a1 = stencil_apply(&s1, &f)?;
    let a2 = stencil_apply(&s2, &f)?;
    let o1 = flat_multiplier_apply(&grid, &f, Axis::U1, ORACLE_PAD)?;
    let o2 = flat_multiplier_apply(&grid, &f, Axis::U2, ORACLE_PAD)?;
    let a12 = stencil_apply(&s1, &a2)?;
    let a21 = stencil_apply(&s2, &a1)?;
    let a11 = stencil_apply(&s1, &a1)?;
    let a22 = stencil_apply(&s2, &a2)?;
    let comm: Vec<f64> = a12.iter().zip(&a21).map(|(x, y)| x - y).collect();
    let sq: Vec<f64> = (0..f.len()).map(|p| a11[p] + a22[p] + f[p]).collect();
    let zero = vec![0.0; f.len()];
    let fnorm = relative_l2(&f, &zero, Some(&inner));
    Ok(FlatIdentities {
        r1: relative_l2(&a1, &o1, None),
        r2: relative_l2(&a2, &o2, None),
        commutator: relative_l2(&comm, &zero, Some(&inner)) / fnorm,
        square_sum: relative_l2(&sq, &zero, Some(&inner)) / fnorm,
        truncation_estimate: truncation_estimate(&grid, &f, &inner) / fnorm,
    })
}

/// L² norm over `inner` of the far-field approximation of what the second
/// application misses:
///
/// ```text
/// T(p) = (1/2π) Σ_k ∫_{v ∉ box} r_k(p - v) (m/2π) v_k/|v|³ dv,   m = ∫ f,
/// ```
///
/// using `R_k f(v) ≈ (m/2π) v_k/|v|³` away from the Gaussian. The exterior
/// integral runs over square shells out to 16 box widths with a spacing of
/// half a unit; targets are every eighth inner node.
fn truncation_estimate(grid: &PlanarGrid, f: &[f64], inner: &[usize]) -> f64 {
    let h = grid.spacing();
    let s = grid.half_width();
    let m: f64 = f.iter().sum::<f64>() * h * h;
    let step = 0.5;
    let outer = 16.0 * s;
    let k = (outer / step) as i64;
    let mut pts = Vec::new();
    for i in -k..k {
        for j in -k..k {
            let v = [(i as f64 + 0.5) * step, (j as f64 + 0.5) * step];
            if v[0].abs() > s || v[1].abs() > s {
                pts.push(v);
            }
        }
    }
    let n = grid.n_per_side();
    let mut sum = 0.0;
    let mut count = 0usize;
    for &p in inner {
        if (p / n) % 8 != 0 || (p % n) % 8 != 0 {
            continue;
        }
        let u = grid.node(p);
        let mut t = 0.0;
        for v in &pts {
            let d = [u[0] - v[0], u[1] - v[1]];
            let rd = (d[0] * d[0] + d[1] * d[1]).sqrt();
            let rv = (v[0] * v[0] + v[1] * v[1]).sqrt();
            t += (d[0] * v[0] + d[1] * v[1]) / (rd * rd * rd * rv * rv * rv);
        }
        t *= step * step * m / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
        sum += t * t;
        count += 1;
    }
    // Each sample stands for 64 inner nodes.
    (sum * (inner.len() as f64 / count as f64)).sqrt()
}

fn criterion_constants(out: &mut CriterionOutcome) -> LabResult<()> {
    let tol = 1e-12;
    for ((l, m), k0) in [((1.0, 1.0), 1.0 / 6.0), ((0.0, 1.0), 0.25), ((2.0, 3.0), 3.0 / 16.0)] {
        let c = constants(&LameParams::new(l, m)?);
        out.checks.push(Check::at_most(
            &format!("k0({l},{m}) = {k0:.6}"),
            (c.k0 - k0).abs(),
            tol,
        ));
    }
    let p = LameParams::new(1.0, 1.0)?;
    let c = constants(&p);
    out.checks.push(Check::at_most("alpha1(1,1) = 2/3", (c.alpha1 - 2.0 / 3.0).abs(), tol));
    out.checks.push(Check::at_most("alpha2(1,1) = 1/3", (c.alpha2 - 1.0 / 3.0).abs(), tol));
    let g = kelvin(&p, [1.0, 0.0, 0.0])?;
    let want = -1.0 / (4.0 * std::f64::consts::PI);
    out.checks.push(Check::at_most("Gamma11((1,0,0)) = -1/4pi", (g[0][0] - want).abs(), tol));
    Ok(())
}

/// Singularity exponent of the Hölder difference kernel at the metric's
/// singular point, and flat-metric vanishing.
fn difference_kernel_checks(out: &mut CriterionOutcome) -> LabResult<()> {
    let flat = builtin_surface(SurfaceKind::Flat)?.metric_field()?;
    let mut worst = 0.0f64;
    for (u, w) in [([0.0, 0.0], [0.3, 0.1]), ([0.5, -0.2], [0.45, -0.25]), ([-1.0, 0.7], [1.2, 0.4])] {
        for pair in [(Axis::U1, Axis::U1), (Axis::U1, Axis::U2), (Axis::U2, Axis::U2)] {
            worst = worst.max(difference_kernel(&flat, u, w, 0.0, 0.0, pair)?.value.abs());
            worst = worst.max(difference_kernel(&flat, u, w, 0.01, 0.02, pair)?.value.abs());
        }
    }
    out.checks.push(Check::at_most("flat difference kernel", worst, 1e-12));

    let alpha = 0.5;
    let (slope, ds) = holder_singularity_exponent(alpha)?;
    let beta = 0.75 * alpha;
    let bound = -(2.0 - beta) - 0.1;
    out.checks.push(Check::new(
        "Holder difference kernel exponent",
        slope >= bound,
        format!("{slope:.4} >= {bound:.4} (|u - w| from {:.3e} to {:.3e})", ds[0], ds[ds.len() - 1]),
    ));
    Ok(())
}

/// Log–log slope of `|k(0, w)|` for the `(1, 2)` pair on the Hölder metric,
/// with `w` approaching the singular point of the metric along a fixed
/// generic direction.
pub fn holder_singularity_exponent(alpha: f64) -> LabResult<(f64, Vec<f64>)> {
    let field = builtin_surface(SurfaceKind::GraphBumpHolder { alpha })?.metric_field()?;
    let (s, c) = 0.7f64.sin_cos();
    let ds: Vec<f64> = (0..7).map(|k| 0.2 * 0.5f64.powi(k)).collect();
    let mut ks = Vec::with_capacity(ds.len());
    for &d in &ds {
        let k = difference_kernel(&field, [0.0, 0.0], [d * c, d * s], 0.0, 0.0, (Axis::U1, Axis::U2))?;
        ks.push(k.value.abs());
    }
    Ok((loglog_slope(&ds, &ks)?, ds))
}

fn criterion_clusters(out: &mut CriterionOutcome) -> LabResult<()> {
    let sphere = ClosedSurface::sphere(1.0)?;
    for (l, m) in [(1.0, 1.0), (0.0, 1.0), (2.0, 3.0)] {
        let p = LameParams::new(l, m)?;
        let k0 = p.constants().k0;
        let mut reports: Vec<SpectrumReport> = Vec::new();
        for n in [24, 32] {
            let eigs = axisymmetric_pair(&p, &sphere, n)?.k.eigenvalues()?;
            reports.push(cluster_report(&eigs, k0, CLUSTER_RADIUS)?);
            out.spectra.push((format!("K_lame_{l}_{m}_N{n}"), eigs));
        }
        let (coarse, fine) = (&reports[0], &reports[1]);
        let tag = format!("({l},{m})");
        out.checks.push(Check::at_most(&format!("{tag} max |Im|"), fine.max_abs_imag, 1e-3));
        out.checks.push(Check::new(
            format!("{tag} assigned fraction"),
            fine.unassigned_fraction() <= 0.1,
            format!("{:.4} >= 0.9", 1.0 - fine.unassigned_fraction()),
        ));
        out.checks.push(Check::new(
            format!("{tag} clusters non-empty"),
            fine.all_nonempty(),
            format!("counts [0, +k0, -k0] = {:?}", fine.counts),
        ));
        out.checks.push(Check::new(
            format!("{tag} unassigned fraction decreases"),
            fine.unassigned_fraction() < coarse.unassigned_fraction(),
            format!(
                "{:.4} (N=24) -> {:.4} (N=32)",
                coarse.unassigned_fraction(),
                fine.unassigned_fraction()
            ),
        ));
    }
    out.notes.push(
        "about half the eigenvalues are exact zeros: the rotation-trick assembly acts on \
         spherical harmonics of degree below N, so its rank is bounded by their count"
            .into(),
    );
    Ok(())
}

fn criterion_structure(out: &mut CriterionOutcome) -> LabResult<()> {
    let sphere = ClosedSurface::sphere(1.0)?;
    let quad = surface_quadrature(&sphere, 8)?;
    let t = dense_operator(&SurfaceKernel::Rotation, &sphere, &quad)?;
    out.checks.push(Check::new(
        "T block antisymmetry (bitwise)",
        t.is_block_antisymmetric(),
        "sphere, N = 8",
    ));

    let bump = builtin_surface(SurfaceKind::GraphBumpSmooth)?;
    let problem = PlanarProblem::new(
        bump.chart,
        bump.metric_field()?,
        PlanarGrid::new(2.0, 32)?,
        CutoffPair::new(0.75, 0.85, 0.95)?,
        0.25,
    )?;
    let (inner, br) = br_matrix(&problem)?;
    let nd = inner.len();
    let mut exact = true;
    for a in 0..3 {
        for b in 0..3 {
            for i in 0..nd {
                for j in 0..nd {
                    let x = br[(a * nd + i, b * nd + j)];
                    let y = br[(b * nd + i, a * nd + j)];
                    exact &= if a == b { x == 0.0 } else { x == -y };
                }
            }
        }
    }
    out.checks.push(Check::new(
        "R block antisymmetry (bitwise)",
        exact,
        format!("smooth bump, N = 32, |D| = {nd}"),
    ));

    let p = LameParams::new(1.0, 1.0)?;
    let k0 = p.constants().k0;
    let k = dense_operator(&SurfaceKernel::Enp(p), &sphere, &quad)?;
    let eig_k = eigenvalues(weighted(&k).as_ref())?;
    let mapped: Vec<Complex64> = eig_k.iter().map(|&z| p3_complex(z, k0)).collect();
    let eig_p3 = eigenvalues(weighted(&p3_apply(&k, k0)?).as_ref())?;
    out.checks.push(Check::at_most(
        "p3 spectral mapping",
        match_multisets(&eig_p3, &mapped)?,
        1e-10,
    ));

    let q16 = surface_quadrature(&sphere, 16)?;
    let four_pi = 4.0 * std::f64::consts::PI;
    out.checks.push(Check::at_most(
        "sphere area 4 pi (relative)",
        (q16.area() - four_pi).abs() / four_pi,
        1e-10,
    ));

    let e1 = axisymmetric_pair(&p, &sphere, 16)?.k.eigenvalues()?;
    let e2 = axisymmetric_pair(&p, &ClosedSurface::sphere(2.0)?, 16)?.k.eigenvalues()?;
    out.checks.push(Check::at_most(
        "K spectrum scale invariance (radius 1 vs 2)",
        match_multisets(&e1, &e2)?,
        1e-6,
    ));
    Ok(())
}
