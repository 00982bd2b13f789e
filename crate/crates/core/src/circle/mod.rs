//! Flat line bundles on the circle: exact spectra, functional determinants,
//! Ray-Singer torsion and the Witten deformation.

mod bz;
mod derham;
mod discrete;
mod exact;
mod gy;
mod model;
mod rs;
mod witten;

pub use bz::*;
pub use derham::{chain_defect, de_rham_map, de_rham_matrices, DeRhamMap};
pub use discrete::{
    band_complex, build_conjugated, build_discrete, spectral_cut, DiscreteOperators, SpectralCut, Stencil,
};
pub use exact::{exact_spectrum_circle, hermitian_det, hurwitz_zeta, zeta_det_exact, zeta_det_pair, ExactSpectrum};
pub use gy::{gelfand_yaglom_det, gelfand_yaglom_det_with, gy_raw, monodromy, OdeOptions, GY_CALIBRATION};
pub use model::{theta_form, witten_deform, CircleModel, Perturbation, Potential, Reference, ThetaForm};
pub use rs::{richardson, rs_discrete_grid, rs_discrete_log, rs_torsion, RsMethod};
pub use witten::*;
