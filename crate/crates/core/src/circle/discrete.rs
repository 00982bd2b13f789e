//! Staggered-grid discretization of the twisted de Rham complex.
//!
//! Nodes `θ_j = jh` carry 0-forms and edge midpoints carry 1-forms, with
//! `h = L/N`. The difference `(du)_j = (u_{j+1} − u_j)/h` picks up the
//! holonomy on the last edge, `(du)_{N−1} = (λu₀ − u_{N−1})/h`. The Grams are
//! diagonal, `G₀ = h·diag e^{2φ(θ_j)}` and `G₁ = h·diag e^{2φ(θ_{j+½})}`, and
//! `d* = G₀⁻¹ dᵀ G₁` is the exact discrete adjoint.

use crate::complex_torsion::{BilinearStructure, GradedComplex};
use crate::error::{Error, Result};
use crate::numkernel::{reorder_schur, schur, sort_spectrum, CMatrix, C64};

use super::model::{CircleModel, Line};

/// Discrete operators for a rank-one model.
#[derive(Debug, Clone)]
pub struct DiscreteOperators {
    pub n: usize,
    pub h: f64,
    pub d: CMatrix,
    pub g0: Vec<C64>,
    pub g1: Vec<C64>,
    pub d_star: CMatrix,
    pub lap0: CMatrix,
    pub lap1: CMatrix,
}

/// Differentiation stencil used in the conjugated Witten frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    /// `d_T = e^{−Tf} d e^{Tf}` on the grid: an exact similarity.
    Exponential,
    /// `d + T f'(θ_{j+½})·(average of endpoints)`: consistent, but not a similarity.
    Linearized,
}

pub fn node(model: &CircleModel, n: usize, j: usize) -> f64 {
    model.length() * j as f64 / n as f64
}

pub fn midpoint(model: &CircleModel, n: usize, j: usize) -> f64 {
    model.length() * (j as f64 + 0.5) / n as f64
}

fn check_grid(model: &CircleModel, n: usize) -> Result<()> {
    if n < 8 {
        return Err(Error::Model(format!("grid of {n} points is too coarse (need at least 8)")));
    }
    if model.rank() != 1 {
        return Err(Error::Unsupported("discrete operators are built per rank-one summand".into()));
    }
    Ok(())
}

fn difference(n: usize, h: f64, lambda: C64) -> CMatrix {
    let mut d = CMatrix::zeros(n, n);
    for j in 0..n {
        d[(j, j)] = C64::new(-1.0 / h, 0.0);
        let next = (j + 1) % n;
        let w = if j == n - 1 { lambda } else { C64::new(1.0, 0.0) };
        d[(j, next)] += w / h;
    }
    d
}

/// Assemble adjoint and Laplacians from `d` and diagonal Grams.
pub fn assemble(d: CMatrix, g0: Vec<C64>, g1: Vec<C64>, h: f64) -> DiscreteOperators {
    let n = g0.len();
    let d_star = CMatrix::from_fn(n, n, |i, j| d[(j, i)] * g1[j] / g0[i]);
    let lap0 = &d_star * &d;
    let lap1 = &d * &d_star;
    DiscreteOperators { n, h, d, g0, g1, d_star, lap0, lap1 }
}

fn weights(line: Line<'_>, n: usize, h: f64, total: bool) -> (Vec<C64>, Vec<C64>) {
    let m = line.model;
    let phi = |th: f64| if total { line.phi(th).0 } else { line.phi_base(th) };
    let g0 = (0..n).map(|j| (2.0 * phi(node(m, n, j))).exp() * h).collect();
    let g1 = (0..n).map(|j| (2.0 * phi(midpoint(m, n, j))).exp() * h).collect();
    (g0, g1)
}

/// Operators for the model's full form, deformation included.
pub fn build_discrete(model: &CircleModel, n: usize) -> Result<DiscreteOperators> {
    check_grid(model, n)?;
    let h = model.length() / n as f64;
    let line = model.line(0);
    let (g0, g1) = weights(line, n, h, true);
    Ok(assemble(difference(n, h, line.lambda), g0, g1, h))
}

/// Operators in the frame `ũ = e^{−Tf}u`, where the Grams are those of the
/// undeformed form and the deformation moves into the differential.
pub fn build_conjugated(model: &CircleModel, n: usize, stencil: Stencil) -> Result<DiscreteOperators> {
    check_grid(model, n)?;
    let h = model.length() / n as f64;
    let line = model.line(0);
    let t = model.t();
    let (g0, g1) = weights(line, n, h, false);
    let d0 = difference(n, h, line.lambda);
    let d = match stencil {
        Stencil::Exponential => CMatrix::from_fn(n, n, |e, j| {
            let scale = (t * (model.f(node(model, n, j)) - model.f(midpoint(model, n, e)))).exp();
            d0[(e, j)] * scale
        }),
        Stencil::Linearized => {
            let mut d = d0.clone();
            for e in 0..n {
                let s = t * model.df(midpoint(model, n, e)) / 2.0;
                let next = (e + 1) % n;
                let w = if e == n - 1 { line.lambda } else { C64::new(1.0, 0.0) };
                d[(e, e)] += s;
                d[(e, next)] += w * s;
            }
            d
        }
    };
    Ok(assemble(d, g0, g1, h))
}

/// Small-band invariant subspaces `|μ| ≤ radius` of both Laplacians.
#[derive(Debug, Clone)]
pub struct SpectralCut {
    pub radius: f64,
    /// Orthonormal basis of the small band in each degree.
    pub bases: [CMatrix; 2],
    /// Full spectra, sorted.
    pub spectra: [Vec<C64>; 2],
}

impl SpectralCut {
    pub fn dims(&self) -> [usize; 2] {
        [self.bases[0].cols(), self.bases[1].cols()]
    }
}

/// Split the spectrum at `|μ| = radius`; eigenvalues closer than the
/// configured clearance to the circle are reported as ambiguous.
pub fn spectral_cut(ops: &DiscreteOperators, radius: f64) -> Result<SpectralCut> {
    let tol = crate::config::Tolerances::default();
    let mut bases = Vec::new();
    let mut spectra = Vec::new();
    for lap in [&ops.lap0, &ops.lap1] {
        let mut s = schur(lap)?;
        if let Some(z) = s.eigenvalues.iter().find(|z| (z.norm() - radius).abs() < tol.cut_clearance * (1.0 + radius)) {
            return Err(Error::AmbiguousCut { re: z.re, im: z.im, clearance: tol.cut_clearance });
        }
        let keep: Vec<bool> = s.eigenvalues.iter().map(|z| z.norm() <= radius).collect();
        let mut ev = s.eigenvalues.clone();
        sort_spectrum(&mut ev);
        let k = reorder_schur(&mut s, &keep);
        bases.push(s.q.columns(0..k));
        spectra.push(ev);
    }
    let [b0, b1]: [CMatrix; 2] = bases.try_into().unwrap();
    let [s0, s1]: [Vec<C64>; 2] = spectra.try_into().unwrap();
    Ok(SpectralCut { radius, bases: [b0, b1], spectra: [s0, s1] })
}

/// The small-band subcomplex with its induced Grams.
pub fn band_complex(ops: &DiscreteOperators, cut: &SpectralCut) -> Result<(GradedComplex, BilinearStructure)> {
    let tol = crate::config::Tolerances::default();
    let [v0, v1] = &cut.bases;
    let mut restricted = &(&v1.adjoint() * &ops.d) * v0;
    // Rank decisions inside the band are relative to the band itself, so
    // flush roundoff measured against the full operator first.
    let floor = tol.rank * ops.d.max_abs();
    for i in 0..restricted.rows() {
        for j in 0..restricted.cols() {
            if restricted[(i, j)].norm() < floor {
                restricted[(i, j)] = C64::new(0.0, 0.0);
            }
        }
    }
    let gram = |v: &CMatrix, g: &[C64]| {
        let gv = CMatrix::from_fn(v.rows(), v.cols(), |i, j| g[i] * v[(i, j)]);
        &v.transpose() * &gv
    };
    let complex = GradedComplex::new_with(vec![v0.cols(), v1.cols()], vec![restricted], &tol.scaled(1e4))?;
    let forms = BilinearStructure::new_with(vec![gram(v0, &ops.g0), gram(v1, &ops.g1)], &tol.scaled(1e3))?;
    Ok((complex, forms))
}

impl DiscreteOperators {
    /// `max |⟨du, v⟩ − ⟨u, d*v⟩|` over basis vectors, relative to the entry scale.
    pub fn adjoint_defect(&self) -> f64 {
        // ⟨du, v⟩ = vᵀ G₁ d u and ⟨u, d* v⟩ = (d* v)ᵀ G₀ u, so compare G₁d with (G₀d*)ᵀ.
        let n = self.n;
        let lhs = CMatrix::from_fn(n, n, |e, j| self.g1[e] * self.d[(e, j)]);
        let rhs = CMatrix::from_fn(n, n, |e, j| self.g0[j] * self.d_star[(j, e)]);
        (&lhs - &rhs).max_abs() / lhs.max_abs().max(f64::MIN_POSITIVE)
    }

    /// The graded Laplacian `diag(D₀², D₁²)`.
    pub fn graded_laplacian(&self) -> CMatrix {
        CMatrix::block_diag(&[self.lap0.clone(), self.lap1.clone()])
    }
}
