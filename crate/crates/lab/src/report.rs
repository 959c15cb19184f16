//! Run summaries: a human-readable text followed by a TOML block between
//! marker lines for scripts.

use serde::Serialize;

use enp_core::spectra::{is_strictly_decreasing, SpectrumReport, DecayReport};

use crate::acceptance::{CriterionOutcome, TAIL_Q};
use crate::suite::CaseReport;

pub const BLOCK_BEGIN: &str = "# ---- BEGIN SUMMARY ----";
pub const BLOCK_END: &str = "# ---- END SUMMARY ----";

/// Tail indices at or below this are numerically zero; such a series counts
/// as compact without a trend.
pub const ZERO_TAIL: f64 = 1e-8;
/// Non-compact operators must keep this fraction of their coarsest tail.
pub const NONCOMPACT_RETENTION: f64 = 0.2;

#[derive(Clone, Debug, Serialize)]
pub struct OperatorSummary {
    pub case: String,
    pub surface: String,
    pub operator: String,
    pub reference: String,
    pub resolutions: Vec<usize>,
    pub tail: Vec<f64>,
    pub reference_tail: Vec<f64>,
    pub trend: String,
    /// The calibrated threshold the finest tail was compared against.
    pub threshold: f64,
    pub rule: String,
    pub pass: bool,
    /// False for diagnostic operators reported alongside a case.
    pub gated: bool,
}

impl OperatorSummary {
    fn new(cr: &CaseReport, rep: &DecayReport, gated: bool) -> Self {
        let tail = rep.tail_series(TAIL_Q).unwrap_or_default();
        let reference_tail = rep.reference_series(TAIL_Q).unwrap_or_default();
        let resolutions = rep.levels.iter().map(|l| l.resolution).collect();
        let fin = *tail.last().unwrap_or(&f64::NAN);
        let decreasing = is_strictly_decreasing(&tail);
        let trend = if tail.iter().all(|&t| t <= ZERO_TAIL) {
            "zero"
        } else if decreasing {
            "decreasing"
        } else if tail.len() < 2 {
            "single level"
        } else {
            "not decreasing"
        };
        let (threshold, rule, pass) = if cr.case.expects_compact() {
            let r = *reference_tail.last().unwrap_or(&f64::NAN);
            let pass = fin <= ZERO_TAIL
                || (fin < r && (decreasing || tail.len() < 2));
            (
                r,
                "finest tail below the reference tail, decreasing over the ladder".to_string(),
                pass,
            )
        } else {
            let t = NONCOMPACT_RETENTION * tail[0];
            (
                t,
                format!("finest tail at least {NONCOMPACT_RETENTION} x the coarsest (calibrated at level 0)"),
                fin >= t && fin > ZERO_TAIL,
            )
        };
        Self {
            case: cr.case.name().into(),
            surface: cr.surface.clone(),
            operator: rep.operator.clone(),
            reference: rep.reference.clone(),
            resolutions,
            tail,
            reference_tail,
            trend: trend.into(),
            threshold,
            rule,
            pass,
            gated,
        }
    }
}

/// Summaries of every operator in a case. For `K_MINUS_K0T` only the first
/// operator is gated; the rest are diagnostics.
pub fn summarize_case(cr: &CaseReport) -> Vec<OperatorSummary> {
    use crate::suite::SuiteCase;
    cr.reports
        .iter()
        .enumerate()
        .map(|(i, rep)| {
            let gated = cr.case != SuiteCase::KMinusK0T || i == 0;
            OperatorSummary::new(cr, rep, gated)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterSummary {
    pub surface: String,
    pub resolution: usize,
    pub k0: f64,
    pub radius: f64,
    /// Counts at `[0, +k0, -k0]`.
    pub counts: [usize; 3],
    pub unassigned: usize,
    pub unassigned_fraction: f64,
    pub max_abs_imag: f64,
}

impl ClusterSummary {
    pub fn new(surface: &str, resolution: usize, r: &SpectrumReport) -> Self {
        Self {
            surface: surface.into(),
            resolution,
            k0: r.k0,
            radius: r.radius,
            counts: r.counts,
            unassigned: r.unassigned,
            unassigned_fraction: r.unassigned_fraction(),
            max_abs_imag: r.max_abs_imag,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionSummary {
    pub id: u8,
    pub title: String,
    pub pass: bool,
    pub checks: Vec<CheckSummary>,
    pub notes: Vec<String>,
}

impl From<&CriterionOutcome> for CriterionSummary {
    fn from(o: &CriterionOutcome) -> Self {
        Self {
            id: o.id,
            title: o.title.into(),
            pass: o.pass(),
            checks: o
                .checks
                .iter()
                .map(|c| CheckSummary {
                    label: c.label.clone(),
                    pass: c.pass,
                    detail: c.detail.clone(),
                })
                .collect(),
            notes: o.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub name: String,
    pub seed: u64,
    pub tail_quantile: f64,
    pub pass: bool,
    pub operators: Vec<OperatorSummary>,
    pub clusters: Vec<ClusterSummary>,
    pub criteria: Vec<CriterionSummary>,
}

impl Summary {
    pub fn new(name: &str, seed: u64) -> Self {
        Self {
            name: name.into(),
            seed,
            tail_quantile: TAIL_Q,
            pass: true,
            operators: Vec::new(),
            clusters: Vec::new(),
            criteria: Vec::new(),
        }
    }

    pub fn finish(&mut self) {
        self.pass = self.operators.iter().all(|o| o.pass || !o.gated)
            && self.criteria.iter().all(|c| c.pass);
    }

    /// Text report, then the machine-readable block.
    pub fn render(&self, config_source: &str) -> String {
        let mut s = String::new();
        s += &format!("experiment: {}\nseed: {}\n", self.name, self.seed);
        s += &format!("verdict: {}\n\n", if self.pass { "PASS" } else { "FAIL" });
        s += "config:\n";
        for line in config_source.lines() {
            s += &format!("  | {line}\n");
        }
        if !self.operators.is_empty() {
            s += &format!(
                "\ntail index sigma_ceil({TAIL_Q}K) / max(sigma_1, sigma_1(reference)); \
                 thresholds are calibration choices, not derived rates\n"
            );
            for o in &self.operators {
                let tag = match (o.gated, o.pass) {
                    (false, _) => "diag",
                    (true, true) => "PASS",
                    (true, false) => "FAIL",
                };
                s += &format!(
                    "  {tag} {} [{}] {} vs {}: N = {:?}\n      tail {} | reference {} | {} | threshold {:.4e} ({})\n",
                    o.case,
                    o.surface,
                    o.operator,
                    o.reference,
                    o.resolutions,
                    fmt(&o.tail),
                    fmt(&o.reference_tail),
                    o.trend,
                    o.threshold,
                    o.rule
                );
            }
        }
        if !self.clusters.is_empty() {
            s += "\neigenvalue clusters of K [0, +k0, -k0]:\n";
            for c in &self.clusters {
                s += &format!(
                    "  {} N = {}: counts {:?}, unassigned {} ({:.4}), max |Im| {:.2e}, k0 = {:.6}, radius {}\n",
                    c.surface,
                    c.resolution,
                    c.counts,
                    c.unassigned,
                    c.unassigned_fraction,
                    c.max_abs_imag,
                    c.k0,
                    c.radius
                );
            }
        }
        if !self.criteria.is_empty() {
            s += "\nacceptance:\n";
            for c in &self.criteria {
                s += &format!(
                    "  {} criterion {}: {}\n",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.id,
                    c.title
                );
                for k in &c.checks {
                    s += &format!(
                        "      {} {}: {}\n",
                        if k.pass { "ok  " } else { "FAIL" },
                        k.label,
                        k.detail
                    );
                }
                for n in &c.notes {
                    s += &format!("      note: {n}\n");
                }
            }
        }
        s += &format!("\n{BLOCK_BEGIN}\n");
        s += &toml::to_string(self).expect("summary serializes");
        s += &format!("{BLOCK_END}\n");
        s
    }
}

fn fmt(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4e}")).collect();
    format!("[{}]", parts.join(", "))
}

/// The TOML block of a rendered summary.
pub fn extract_block(text: &str) -> Option<&str> {
    let start = text.find(BLOCK_BEGIN)? + BLOCK_BEGIN.len();
    let end = text[start..].find(BLOCK_END)? + start;
    Some(text[start..end].trim_matches('\n'))
}
