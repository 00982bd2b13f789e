//! Dense complex linear algebra.
//!
//! Everything here works on [`CMatrix`], a plain row-major matrix of
//! `Complex64`. The eigen routines never assume diagonalizability: spectral
//! subspaces come from a reordered Schur form.

mod bilinear;
mod lu;
mod matrix;
mod schur;

pub use bilinear::{bilinear_orthonormalize, bilinear_orthonormalize_with};
pub use lu::{inverse, lu_det, lu_log_det, rank_reveal, solve, solve_with, RankReveal};
pub use matrix::{c, CMatrix, C64};
pub use schur::{
    eigenvalues, eigenvalues_with, hessenberg, invariant_subspace, invariant_subspace_with, reorder_schur, schur,
    schur_with, sort_spectrum, Disk, SchurDecomposition, SpectralRegion,
};
