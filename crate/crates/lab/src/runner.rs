//! Executes a validated [`ExperimentConfig`] and writes its artifacts.
//!
//! Layout under the output directory:
//!
//! ```text
//! summary.txt
//! <surface>/<CASE>_sv_level<k>.csv           first operator of the case
//! <surface>/<CASE>_op<j>_sv_level<k>.csv     further operators (j >= 1)
//! <surface>/<CASE>_reference_sv_level<k>.csv
//! <surface>/<CASE>_eigs.csv                  surface cases, finest level
//! <surface>/K_eigs_level<k>.csv
//! acceptance/...                             the same for acceptance runs
//! ```
//!
//! Nothing time-dependent is written, so identical configs give identical
//! files.

use std::fs;
use std::path::{Path, PathBuf};

use enp_core::spectra::{cluster_report, MAX_IMAGINARY_PART};

use crate::acceptance::Acceptance;
use crate::config::ExperimentConfig;
use crate::csvio::{write_column, write_complex};
use crate::error::{LabError, LabResult};
use crate::report::{summarize_case, ClusterSummary, CriterionSummary, Summary};
use crate::suite::{planar_suite, surface_run, CaseReport};

/// What a run produced.
#[derive(Debug)]
pub struct RunOutcome {
    pub summary: Summary,
    pub output_dir: PathBuf,
    /// One line per acceptance criterion, with timings.
    pub criterion_lines: Vec<String>,
}

impl RunOutcome {
    /// 0 when every gated verdict passed, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.pass {
            0
        } else {
            3
        }
    }
}

fn write_case(dir: &Path, cr: &CaseReport) -> LabResult<()> {
    fs::create_dir_all(dir)?;
    for (j, rep) in cr.reports.iter().enumerate() {
        let stem = if j == 0 {
            cr.case.name().to_string()
        } else {
            format!("{}_op{j}", cr.case.name())
        };
        for lvl in &rep.levels {
            write_column(
                &dir.join(format!("{stem}_sv_level{}.csv", lvl.level)),
                "sigma",
                &lvl.singular_values,
            )?;
            if j == 0 {
                write_column(
                    &dir.join(format!("{}_reference_sv_level{}.csv", cr.case.name(), lvl.level)),
                    "sigma",
                    &lvl.reference_singular_values,
                )?;
            }
        }
    }
    Ok(())
}

/// Run everything the config asks for. Numeric failures name the case.
pub fn run(config: &ExperimentConfig) -> LabResult<RunOutcome> {
    crate::linalg::init_sequential();
    let out_dir = config.resolved_output_dir();
    fs::create_dir_all(&out_dir)?;
    let mut summary = Summary::new(&config.name, config.seed);
    let mut lines = Vec::new();
    let context = |case: &str, e: LabError| match e {
        LabError::Numeric(m) => LabError::Numeric(format!("{case}: {m}")),
        LabError::Core(enp_core::Error::NonFinite(m)) => LabError::Numeric(format!("{case}: {m}")),
        other => other,
    };

    if let Some(planar) = &config.planar {
        let cases: Vec<_> = config.cases.iter().copied().filter(|c| c.is_planar()).collect();
        if !cases.is_empty() {
            for kind in &planar.metrics {
                let reports = planar_suite(*kind, &cases, &planar.settings, &planar.chart_ladder)
                    .map_err(|e| context(kind.name(), e))?;
                for cr in &reports {
                    write_case(&out_dir.join(kind.name()), cr)?;
                    summary.operators.extend(summarize_case(cr));
                }
            }
        }
    }

    if let Some(surf) = &config.surface {
        let cases: Vec<_> = config.cases.iter().copied().filter(|c| !c.is_planar()).collect();
        if !cases.is_empty() {
            let run = surface_run(&surf.name, &surf.surface, &config.lame, &cases, &surf.ladder, true)
                .map_err(|e| context(&surf.name, e))?;
            let dir = out_dir.join(&surf.name);
            let k0 = config.lame.constants().k0;
            for (k, (n, eigs)) in run.k_eigenvalues.iter().enumerate() {
                write_complex(&dir_ready(&dir)?.join(format!("K_eigs_level{k}.csv")), eigs)?;
                let rep = cluster_report(eigs, k0, surf.cluster_radius)?;
                if rep.max_abs_imag > MAX_IMAGINARY_PART {
                    return Err(LabError::Numeric(format!(
                        "{} K at N = {n}: eigenvalue imaginary part {:.3e} exceeds {MAX_IMAGINARY_PART}",
                        surf.name, rep.max_abs_imag
                    )));
                }
                summary.clusters.push(ClusterSummary::new(&surf.name, *n, &rep));
            }
            for cr in &run.reports {
                write_case(&dir, cr)?;
                summary.operators.extend(summarize_case(cr));
            }
            for (case, eigs) in &run.case_eigenvalues {
                write_complex(&dir.join(format!("{}_eigs.csv", case.name())), eigs)?;
            }
        }
    }

    if !config.criteria.is_empty() {
        let mut acc = Acceptance::new();
        let dir = out_dir.join("acceptance");
        for &id in &config.criteria {
            let o = acc.run(id).map_err(|e| context(&format!("criterion {id}"), e))?;
            lines.push(o.line());
            for cr in &o.reports {
                write_case(&dir.join(&cr.surface), cr)?;
            }
            for (name, eigs) in &o.spectra {
                write_complex(&dir_ready(&dir)?.join(format!("{name}_eigs.csv")), eigs)?;
            }
            summary.criteria.push(CriterionSummary::from(&o));
        }
    }

    summary.finish();
    fs::write(out_dir.join("summary.txt"), summary.render(&config.source))?;
    Ok(RunOutcome {
        summary,
        output_dir: out_dir,
        criterion_lines: lines,
    })
}

fn dir_ready(dir: &Path) -> LabResult<&Path> {
    fs::create_dir_all(dir)?;
    Ok(dir)
}
