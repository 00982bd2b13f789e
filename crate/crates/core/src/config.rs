//! Numerical tolerances used throughout the crate.
//!
//! Every threshold lives here so a caller can tighten or loosen the whole
//! pipeline with a single scale factor.

/// Tolerance policy. `Default` gives the standard values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Pivot magnitude, relative to the row scale, below which `solve` reports singularity.
    pub singular_pivot: f64,
    /// Relative threshold for numerical rank decisions.
    pub rank: f64,
    /// Clearance required between an eigenvalue and a spectral cut.
    pub cut_clearance: f64,
    /// Isotropic-pivot threshold in bilinear Gram-Schmidt, relative to the form scale.
    pub isotropic: f64,
    /// Symmetry defect accepted for bilinear forms, relative to their scale.
    pub symmetry: f64,
    /// Determinant magnitude, relative to scale, below which a form is degenerate.
    pub degenerate: f64,
    /// Cocycle residual accepted for supplied cohomology representatives.
    pub cocycle: f64,
    /// Residual accepted for `d∘d = 0` in supplied complexes.
    pub complex_defect: f64,
    /// Factor applied to the QR sweep budget `n^2`.
    pub qr_sweeps_per_n2: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            singular_pivot: 1e-13,
            rank: 1e-10,
            cut_clearance: 1e-9,
            isotropic: 1e-10,
            symmetry: 1e-12,
            degenerate: 1e-12,
            cocycle: 1e-10,
            complex_defect: 1e-12,
            qr_sweeps_per_n2: 50,
        }
    }
}

impl Tolerances {
    /// Multiply every floating threshold by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Tolerances {
            singular_pivot: self.singular_pivot * factor,
            rank: self.rank * factor,
            cut_clearance: self.cut_clearance * factor,
            isotropic: self.isotropic * factor,
            symmetry: self.symmetry * factor,
            degenerate: self.degenerate * factor,
            cocycle: self.cocycle * factor,
            complex_defect: self.complex_defect * factor,
            qr_sweeps_per_n2: self.qr_sweeps_per_n2,
        }
    }
}
