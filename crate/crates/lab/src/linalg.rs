//! Thin wrappers over faer for the dense work: eigenvalues, singular values
//! and the weight symmetrization `W^{1/2} A W^{-1/2}`.

use enp_core::dense::{BlockOperator, DenseMatrix};
use faer::{Mat, MatRef, Par};
use num_complex::Complex64;

use crate::error::{LabError, LabResult};

/// Pin faer to one thread so repeated runs are bitwise identical.
pub fn init_sequential() {
    faer::set_global_parallelism(Par::Seq);
}

pub fn to_faer(a: &DenseMatrix) -> Mat<f64> {
    Mat::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j))
}

/// `W^{1/2} A W^{-1/2}` of a block operator (weights repeated per block).
pub fn weighted(op: &BlockOperator) -> Mat<f64> {
    let m = op.nodes();
    let w = op.weights();
    let a = op.matrix();
    let s: Vec<f64> = (0..3 * m).map(|k| w[k % m].sqrt()).collect();
    Mat::from_fn(3 * m, 3 * m, |i, j| a.get(i, j) * s[i] / s[j])
}

fn check_finite_real(a: MatRef<'_, f64>, what: &str) -> LabResult<()> {
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            if !a[(i, j)].is_finite() {
                return Err(LabError::Numeric(format!("{what}: non-finite entry")));
            }
        }
    }
    Ok(())
}

fn check_finite_complex(a: MatRef<'_, Complex64>, what: &str) -> LabResult<()> {
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let z = a[(i, j)];
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(LabError::Numeric(format!("{what}: non-finite entry")));
            }
        }
    }
    Ok(())
}

/// Eigenvalues sorted by real part.
pub fn eigenvalues(a: MatRef<'_, f64>) -> LabResult<Vec<Complex64>> {
    if a.nrows() != a.ncols() {
        return Err(LabError::Numeric("eigenvalues of a non-square matrix".into()));
    }
    check_finite_real(a, "eigenvalues")?;
    let mut e = a
        .eigenvalues()
        .map_err(|e| LabError::Numeric(format!("eigensolver failed: {e:?}")))?;
    enp_core::spectra::sort_by_real(&mut e);
    Ok(e)
}

pub fn eigenvalues_complex(a: MatRef<'_, Complex64>) -> LabResult<Vec<Complex64>> {
    if a.nrows() != a.ncols() {
        return Err(LabError::Numeric("eigenvalues of a non-square matrix".into()));
    }
    check_finite_complex(a, "eigenvalues")?;
    let mut e = a
        .eigenvalues()
        .map_err(|e| LabError::Numeric(format!("eigensolver failed: {e:?}")))?;
    enp_core::spectra::sort_by_real(&mut e);
    Ok(e)
}

/// Singular values, descending.
pub fn singular_values(a: MatRef<'_, f64>) -> LabResult<Vec<f64>> {
    check_finite_real(a, "singular values")?;
    let s = a
        .singular_values()
        .map_err(|e| LabError::Numeric(format!("SVD failed: {e:?}")))?;
    Ok(clean_descending(s))
}

pub fn singular_values_complex(a: MatRef<'_, Complex64>) -> LabResult<Vec<f64>> {
    check_finite_complex(a, "singular values")?;
    let s = a
        .singular_values()
        .map_err(|e| LabError::Numeric(format!("SVD failed: {e:?}")))?;
    Ok(clean_descending(s))
}

/// Sort descending and clamp tiny negative roundoff to zero.
pub fn clean_descending(mut s: Vec<f64>) -> Vec<f64> {
    for v in &mut s {
        *v = v.max(0.0);
    }
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `A (A² - k₀² I)` for a square matrix.
pub fn p3_matrix<T>(a: MatRef<'_, T>, k0: f64) -> Mat<T>
where
    T: faer::traits::ComplexField + From<f64> + Copy,
{
    let n = a.nrows();
    let mut a2 = a * a;
    let shift = T::from(k0 * k0);
    for i in 0..n {
        a2[(i, i)] = a2[(i, i)] - shift;
    }
    a * &a2
}
