//! Planar surface Riesz transforms `R_j^g`.
//!
//! `R_j^g f(u) = (1/2π) p.v.∫ r_j(u, u - v) f(v) dv` with
//! `r_j(u, w) = w_j ⟨w, G(u) w⟩^{-3/2}`. This module holds the pointwise
//! kernels and symbols, the uniform cell-centred grid, the Nyström rules and
//! the difference kernel of the frozen-coefficient composition.

mod difference;
mod grid;
mod kernel;
mod nystrom;

pub use difference::{difference_kernel, DifferenceKernel};
pub use grid::{PlanarGrid, Window};
pub use kernel::{l_form, r_kernel, symbol, symbol_unchecked, Axis};
pub use nystrom::{
    assemble_riesz, lattice_correction, NystromRiesz, PvRule, Stencil, FLAT_LATTICE_CONSTANT,
};
