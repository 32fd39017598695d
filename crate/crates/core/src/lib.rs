//! Discrete-variable Gaussian states on the odd-dimensional phase space ℤ_d × ℤ_d.
//!
//! The crate builds the finite phase-space operators (DFT, displacements,
//! displaced parities), the discrete Wigner transform and its inverse,
//! Gaussian states synthesised from periodised continuum Gaussians, thermal
//! states, and the approximate Gaussian dynamics generated by quadratic
//! Hamiltonians in the ladder operators.

// Index loops mirror the matrix formulas; `!(x > 0.0)` also rejects NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod dynamics;
pub mod error;
pub mod gaussian;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod operators;
pub mod theta;
pub mod thermal;
pub mod wigner;

pub use error::{Error, Result};
pub use lattice::{LatticeDim, Modes, WignerGrid};
pub use linalg::{CMatrix, CVector};
