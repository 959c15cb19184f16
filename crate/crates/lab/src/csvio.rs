//! CSV emission. Every float is written as `{:.16e}` (17 significant
//! digits), which round-trips an `f64` exactly, so re-emitting a parsed file
//! reproduces it byte for byte.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{LabError, LabResult};

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_float(s: &str, path: &Path) -> LabResult<f64> {
    s.trim()
        .parse()
        .map_err(|_| LabError::Numeric(format!("{}: `{s}` is not a number", path.display())))
}

/// Write one named column, one value per line.
pub fn write_column(path: &Path, header: &str, values: &[f64]) -> LabResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([header])?;
    for &v in values {
        w.write_record([format_float(v)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_column(path: &Path) -> LabResult<(String, Vec<f64>)> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.get(0).unwrap_or_default().to_string();
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        out.push(parse_float(rec.get(0).unwrap_or_default(), path)?);
    }
    Ok((header, out))
}

/// Eigenvalues as `re,im` rows.
pub fn write_complex(path: &Path, values: &[Complex64]) -> LabResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["re", "im"])?;
    for z in values {
        w.write_record([format_float(z.re), format_float(z.im)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_complex(path: &Path) -> LabResult<Vec<Complex64>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let re = parse_float(rec.get(0).unwrap_or_default(), path)?;
        let im = parse_float(rec.get(1).unwrap_or_default(), path)?;
        out.push(Complex64::new(re, im));
    }
    Ok(out)
}
