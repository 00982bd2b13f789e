use thiserror::Error;

/// Errors produced anywhere in the crate.
///
/// Numerical failures and malformed input are kept apart so that the command
/// line front end can map them to distinct exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular to working precision at pivot {pivot}")]
    Singular { pivot: usize },
    #[error("QR iteration stalled on the active block [{lo}, {hi}] after {sweeps} sweeps")]
    NoConvergence { lo: usize, hi: usize, sweeps: usize },
    #[error("eigenvalue {re:+.3e}{im:+.3e}i lies within {clearance:.1e} of the spectral cut")]
    AmbiguousCut { re: f64, im: f64, clearance: f64 },
    #[error("bilinear form is degenerate: {0}")]
    Degenerate(String),
    #[error("form is not symmetric (defect {0:.3e})")]
    NotSymmetric(f64),
    #[error("not a cochain complex: differential {degree} composed with its successor has norm {defect:.3e}")]
    NotAComplex { degree: usize, defect: f64 },
    #[error("cohomology data inconsistent with the complex: {0}")]
    Cohomology(String),
    #[error("Gram matrix in degree {degree} is numerically singular")]
    Conditioning { degree: usize },
    #[error("matrix in degree {0} is not invertible")]
    NotInvertible(usize),
    #[error("inconsistent instantons: coboundary squares to nonzero between `{from}` and `{to}`")]
    InconsistentInstantons { from: String, to: String },
    #[error("invalid Morse system: {0}")]
    Morse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("invalid model: {0}")]
    Model(String),
    #[error("spectral gap not resolved: {0}")]
    Resolution(String),
    #[error("ODE integration failed: {0}")]
    Stiff(String),
    #[error("extrapolation did not settle: {0}")]
    Extrapolation(String),
    #[error("outside the balanced regime (imbalance {0:.3e}); use the anomaly comparison instead")]
    OutOfScope(f64),
    #[error("stencil mismatch: conjugated spectra differ by {mismatch:.3e} (bound {bound:.3e})")]
    StencilMismatch { mismatch: f64, bound: f64 },
    #[error("schema error at `{field}`: {message}")]
    Schema { field: String, message: String },
}

impl Error {
    /// True for input-shape problems, false for numerical failures.
    pub fn is_schema(&self) -> bool {
        matches!(self, Error::Schema { .. } | Error::Presentation(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
