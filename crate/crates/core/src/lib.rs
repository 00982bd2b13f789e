//! Complex-valued torsions of flat bundles carrying nondegenerate symmetric
//! bilinear forms.
//!
//! The crate is organised bottom-up:
//!
//! * [`numkernel`]: dense complex linear algebra (determinants, Schur forms,
//!   spectral subspaces, bilinear Gram-Schmidt).
//! * [`complex_torsion`]: the bilinear torsion of a finite cochain complex.
//! * [`thom_smale`]: Thom-Smale complexes of Morse systems and Milnor torsion.
//! * [`turaev`]: Euler structures, Turaev torsion and Alexander polynomials.
//! * [`circle`]: the analytic side on the circle: twisted Laplacians, zeta
//!   determinants, Ray-Singer torsion and Witten deformation experiments.
//! * [`verify`]: the numerical verification suite.
//!
//! A narrative guide lives in the `book/` directory of the repository; its
//! code snippets are compiled as doc-tests of this crate.

pub mod circle;
pub mod complex_torsion;
pub mod config;
pub mod error;
pub mod io;
pub mod numkernel;
pub mod random;
pub mod thom_smale;
pub mod turaev;
pub mod verify;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use numkernel::{c, CMatrix, C64};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/finite_complex.md")]
    mod finite_complex {}
    #[doc = include_str!("../../../book/src/morse.md")]
    mod morse {}
    #[doc = include_str!("../../../book/src/turaev.md")]
    mod turaev {}
    #[doc = include_str!("../../../book/src/circle.md")]
    mod circle {}
    #[doc = include_str!("../../../book/src/witten.md")]
    mod witten {}
}
