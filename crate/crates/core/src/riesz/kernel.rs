use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Sym2;

/// Coordinate direction `j ∈ {1, 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    U1,
    U2,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::U1, Axis::U2];

    /// Zero-based component index.
    pub fn index(self) -> usize {
        match self {
            Axis::U1 => 0,
            Axis::U2 => 1,
        }
    }

    /// From the one-based label used in formulas and configs.
    pub fn from_label(j: usize) -> Result<Self> {
        match j {
            1 => Ok(Axis::U1),
            2 => Ok(Axis::U2),
            _ => Err(Error::Parameter(alloc::format!("axis must be 1 or 2, got {j}"))),
        }
    }
}

fn check_spd(g: &Sym2) -> Result<()> {
    if g.is_positive_definite() {
        Ok(())
    } else {
        Err(Error::Parameter("metric must be positive definite".into()))
    }
}

/// `⟨w, G w⟩^{-3/2}`.
pub fn l_form(g: &Sym2, w: [f64; 2]) -> Result<f64> {
    check_spd(g)?;
    if w == [0.0, 0.0] {
        return Err(Error::Singular("L form at w = 0"));
    }
    let q = g.quad(w);
    Ok(1.0 / (q * libm::sqrt(q)))
}

/// `r_j(G, w) = w_j ⟨w, G w⟩^{-3/2}`.
pub fn r_kernel(j: Axis, g: &Sym2, w: [f64; 2]) -> Result<f64> {
    Ok(w[j.index()] * l_form(g, w)?)
}

/// Symbol of `R_j` with the metric frozen at `G`:
/// `-i det(G)^{-1/2} (G⁻¹ξ)_j / √(ξᵀG⁻¹ξ)`.
pub fn symbol(g: &Sym2, xi: [f64; 2], j: Axis) -> Result<Complex64> {
    check_spd(g)?;
    if xi == [0.0, 0.0] {
        return Err(Error::Singular("symbol at ξ = 0"));
    }
    Ok(symbol_unchecked(g, xi, j))
}

/// [`symbol`] without validation; returns 0 at `ξ = 0`.
#[inline]
pub fn symbol_unchecked(g: &Sym2, xi: [f64; 2], j: Axis) -> Complex64 {
    if xi == [0.0, 0.0] {
        return Complex64::new(0.0, 0.0);
    }
    let det = g.det();
    // G⁻¹ = adj(G)/det.
    let adj = Sym2::new(g.g22, -g.g12, g.g11);
    let v = adj.apply(xi);
    let q = adj.quad(xi);
    // det^{-1/2} (adj ξ)_j / det / √(q/det) = (adj ξ)_j / (det √q).
    Complex64::new(0.0, -v[j.index()] / (det * libm::sqrt(q)))
}
