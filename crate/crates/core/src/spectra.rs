//! Value types for spectral diagnostics: cluster assignment against
//! `{0, ±k₀}`, singular-value tail indices and multiset matching.
//!
//! The dense eigen/SVD work happens in `enp-lab`; this module only interprets
//! the numbers.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Quantiles at which tail indices are reported.
pub const TAIL_QUANTILES: [f64; 3] = [0.05, 0.1, 0.25];

/// Imaginary parts above this fail a run on a symmetrizable operator.
pub const MAX_IMAGINARY_PART: f64 = 1e-2;

/// `p₃(t) = t(t² - k₀²)`.
pub fn p3(t: f64, k0: f64) -> f64 {
    t * (t * t - k0 * k0)
}

pub fn p3_complex(t: Complex64, k0: f64) -> Complex64 {
    t * (t * t - k0 * k0)
}

/// Sort by real part, then imaginary part.
pub fn sort_by_real(values: &mut [Complex64]) {
    values.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
    });
}

/// Cluster targets, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Zero,
    PlusK0,
    MinusK0,
}

impl Target {
    pub const ALL: [Target; 3] = [Target::Zero, Target::PlusK0, Target::MinusK0];

    pub fn value(self, k0: f64) -> f64 {
        match self {
            Target::Zero => 0.0,
            Target::PlusK0 => k0,
            Target::MinusK0 => -k0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Target::Zero => "0",
            Target::PlusK0 => "+k0",
            Target::MinusK0 => "-k0",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Complex64>,
    pub k0: f64,
    pub radius: f64,
    /// Counts in [`Target::ALL`] order.
    pub counts: [usize; 3],
    pub unassigned: usize,
    pub max_abs_imag: f64,
}

impl SpectrumReport {
    pub fn count(&self, t: Target) -> usize {
        self.counts[t as usize]
    }

    pub fn all_nonempty(&self) -> bool {
        self.counts.iter().all(|&c| c > 0)
    }

    pub fn unassigned_fraction(&self) -> f64 {
        if self.eigenvalues.is_empty() {
            0.0
        } else {
            self.unassigned as f64 / self.eigenvalues.len() as f64
        }
    }

    /// Nearest target within the radius, if any.
    pub fn assignment(&self, z: Complex64) -> Option<Target> {
        assign(z, self.k0, self.radius)
    }
}

fn assign(z: Complex64, k0: f64, radius: f64) -> Option<Target> {
    Target::ALL
        .iter()
        .map(|&t| (t, (z - t.value(k0)).norm()))
        .filter(|&(_, d)| d <= radius)
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
        .map(|(t, _)| t)
}

/// Assign each eigenvalue to the nearest of `{0, +k₀, -k₀}` within `radius`.
pub fn cluster_report(eigs: &[Complex64], k0: f64, radius: f64) -> Result<SpectrumReport> {
    if !(k0 > 0.0 && k0.is_finite()) {
        return Err(Error::Config(alloc::format!("k0 must be positive, got {k0}")));
    }
    if !(radius > 0.0 && radius < 0.5 * k0) {
        return Err(Error::Config(alloc::format!(
            "cluster radius {radius} must lie in (0, k0/2) = (0, {})",
            0.5 * k0
        )));
    }
    if eigs.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite("eigenvalues"));
    }
    let mut counts = [0usize; 3];
    let mut unassigned = 0;
    for &z in eigs {
        match assign(z, k0, radius) {
            Some(t) => counts[t as usize] += 1,
            None => unassigned += 1,
        }
    }
    let max_abs_imag = eigs.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    Ok(SpectrumReport {
        eigenvalues: eigs.to_vec(),
        k0,
        radius,
        counts,
        unassigned,
        max_abs_imag,
    })
}

/// `σ_{⌈qK⌉} / scale` for descending `sv` (1-based index, clamped to `[1, K]`).
/// Returns 0 for an empty list or a zero scale.
pub fn tail_index_scaled(sv: &[f64], q: f64, scale: f64) -> f64 {
    if sv.is_empty() || !(scale > 0.0) {
        return 0.0;
    }
    let k = libm::ceil(q * sv.len() as f64) as usize;
    let k = k.clamp(1, sv.len());
    (sv[k - 1] / scale).clamp(0.0, 1.0)
}

/// `σ_{⌈qK⌉} / σ₁`.
pub fn tail_index(sv: &[f64], q: f64) -> f64 {
    tail_index_scaled(sv, q, sv.first().copied().unwrap_or(0.0))
}

/// Singular values and tail indices of one operator at one ladder level.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayLevel {
    pub level: usize,
    /// Grid size or quadrature resolution.
    pub resolution: usize,
    pub singular_values: Vec<f64>,
    pub reference_singular_values: Vec<f64>,
    /// `σ_{⌈qK⌉}/s` for each of [`TAIL_QUANTILES`], with
    /// `s = max(σ₁(case), σ₁(reference))`.
    pub tail: [f64; 3],
    pub reference_tail: [f64; 3],
}

impl DecayLevel {
    pub fn new(
        level: usize,
        resolution: usize,
        singular_values: Vec<f64>,
        reference_singular_values: Vec<f64>,
    ) -> Result<Self> {
        for sv in [&singular_values, &reference_singular_values] {
            if sv.iter().any(|s| !s.is_finite() || *s < 0.0) {
                return Err(Error::NonFinite("singular values"));
            }
            if sv.windows(2).any(|w| w[1] > w[0]) {
                return Err(Error::Domain("singular values must be descending".into()));
            }
        }
        let scale = singular_values
            .first()
            .copied()
            .unwrap_or(0.0)
            .max(reference_singular_values.first().copied().unwrap_or(0.0));
        let tail = TAIL_QUANTILES.map(|q| tail_index_scaled(&singular_values, q, scale));
        let reference_tail =
            TAIL_QUANTILES.map(|q| tail_index_scaled(&reference_singular_values, q, scale));
        Ok(Self {
            level,
            resolution,
            singular_values,
            reference_singular_values,
            tail,
            reference_tail,
        })
    }

    pub fn tail_at(&self, q: f64) -> Option<f64> {
        quantile_slot(q).map(|i| self.tail[i])
    }

    pub fn reference_tail_at(&self, q: f64) -> Option<f64> {
        quantile_slot(q).map(|i| self.reference_tail[i])
    }
}

fn quantile_slot(q: f64) -> Option<usize> {
    TAIL_QUANTILES.iter().position(|&t| (t - q).abs() < 1e-12)
}

/// Tail indices of a case and its non-compact reference over a ladder.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayReport {
    pub operator: String,
    pub reference: String,
    pub levels: Vec<DecayLevel>,
}

impl DecayReport {
    pub fn tail_series(&self, q: f64) -> Option<Vec<f64>> {
        self.levels.iter().map(|l| l.tail_at(q)).collect()
    }

    pub fn reference_series(&self, q: f64) -> Option<Vec<f64>> {
        self.levels.iter().map(|l| l.reference_tail_at(q)).collect()
    }

    pub fn finest(&self) -> Option<&DecayLevel> {
        self.levels.last()
    }

    /// Finest-level tail strictly below the reference's at `q`.
    pub fn separated_at_finest(&self, q: f64) -> bool {
        self.finest()
            .and_then(|l| Some(l.tail_at(q)? < l.reference_tail_at(q)?))
            .unwrap_or(false)
    }
}

/// Non-increasing, with strict decrease between first and last.
pub fn is_decreasing_trend(xs: &[f64]) -> bool {
    xs.len() >= 2 && xs.windows(2).all(|w| w[1] <= w[0]) && xs[xs.len() - 1] < xs[0]
}

/// Strictly decreasing at every step.
pub fn is_strictly_decreasing(xs: &[f64]) -> bool {
    xs.len() >= 2 && xs.windows(2).all(|w| w[1] < w[0])
}

/// Greedy nearest-neighbour pairing of two equally long multisets; returns
/// the largest pair distance. The closest remaining pair is taken first.
pub fn match_multisets(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Domain(alloc::format!(
            "multisets differ in size ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap_or(Ordering::Equal));
    let mut used_a = alloc::vec![false; n];
    let mut used_b = alloc::vec![false; n];
    let mut worst = 0.0f64;
    let mut matched = 0;
    for (d, i, j) in pairs {
        if matched == n {
            break;
        }
        if used_a[i] || used_b[j] {
            continue;
        }
        used_a[i] = true;
        used_b[j] = true;
        matched += 1;
        worst = worst.max(d);
    }
    Ok(worst)
}
