//! Euler structures, Turaev torsion, and Alexander polynomials.
//!
//! An Euler structure is stored combinatorially as a spider: a base point and
//! a path word `σ_x` from it to every critical point. The fiberwise form at
//! `x` is the base form transported along `σ_x`,
//! `b_x(u, v) = b₀(ρ(σ_x)⁻¹u, ρ(σ_x)⁻¹v)`, and the Turaev torsion is the
//! Milnor torsion with these forms.
//!
//! On the circle the class of an Euler structure is an integer, computed by
//! [`euler_class_circle`]. Shifting it by `k` multiplies the rank-one torsion
//! by `λ^{−2k}`.

mod fox;

pub use fox::{fox_alexander, KnotPresentation, Laurent};

use serde::{Deserialize, Serialize};

use crate::complex_torsion::CohomologyData;
use crate::error::{Error, Result};
use crate::numkernel::{inverse, CMatrix, C64};
use crate::thom_smale::{milnor_torsion, CriticalForms, MorseSystem};

/// A word in the generators of `π₁`: `(generator, exponent)` pairs.
pub type PathWord = Vec<(String, i32)>;

/// Assignment of invertible matrices to the generators of `π₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    rank: usize,
    generators: Vec<String>,
    images: Vec<CMatrix>,
}

impl Representation {
    pub fn new(generators: Vec<String>, images: Vec<CMatrix>) -> Result<Self> {
        if generators.len() != images.len() || images.is_empty() {
            return Err(Error::Dimension("one image per generator required".into()));
        }
        let rank = images[0].rows();
        for (g, m) in generators.iter().zip(&images) {
            if !m.is_square() || m.rows() != rank {
                return Err(Error::Dimension(format!("image of `{g}` is not {rank}x{rank}")));
            }
            inverse(m).map_err(|_| Error::Unsupported(format!("image of `{g}` is not invertible")))?;
        }
        Ok(Representation { rank, generators, images })
    }

    /// The circle group `Z = ⟨t⟩` acting through `holonomy`.
    pub fn circle(holonomy: CMatrix) -> Result<Self> {
        Self::new(vec!["t".into()], vec![holonomy])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn evaluate(&self, word: &[(String, i32)]) -> Result<CMatrix> {
        let mut m = CMatrix::identity(self.rank);
        for (g, e) in word {
            let k = self
                .generators
                .iter()
                .position(|h| h == g)
                .ok_or_else(|| Error::Unsupported(format!("unknown generator `{g}`")))?;
            let base = if *e >= 0 { self.images[k].clone() } else { inverse(&self.images[k])? };
            for _ in 0..e.unsigned_abs() {
                m = &m * &base;
            }
        }
        Ok(m)
    }
}

/// A spider: paths from the base point to each critical point, listed in the
/// order of [`MorseSystem::points`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerStructure {
    pub base: String,
    pub paths: Vec<PathWord>,
}

impl EulerStructure {
    /// Circle spider with the given winding numbers around the generator `t`.
    pub fn circle(base: &str, windings: &[i32]) -> Self {
        EulerStructure { base: base.into(), paths: windings.iter().map(|&w| vec![("t".to_string(), w)]).collect() }
    }

    /// Total exponent of `t` along each path.
    pub fn windings(&self) -> Vec<i64> {
        self.paths.iter().map(|p| p.iter().filter(|(g, _)| g == "t").map(|&(_, e)| e as i64).sum()).collect()
    }
}

/// The forms `b_x` obtained by transporting `b0` along the spider.
pub fn transported_forms(
    ms: &MorseSystem,
    rep: &Representation,
    e: &EulerStructure,
    b0: &CMatrix,
) -> Result<CriticalForms> {
    if e.paths.len() != ms.points().len() {
        return Err(Error::Dimension(format!(
            "{} spider paths for {} critical points",
            e.paths.len(),
            ms.points().len()
        )));
    }
    if ms.position(&e.base).is_none() {
        return Err(Error::Unsupported(format!("base point `{}` is not a critical point", e.base)));
    }
    if rep.rank() != ms.rank() || b0.rows() != ms.rank() || !b0.is_square() {
        return Err(Error::Dimension("representation, base form and bundle ranks differ".into()));
    }
    let forms = e
        .paths
        .iter()
        .map(|p| {
            let inv = inverse(&rep.evaluate(p)?)?;
            Ok(&(&inv.transpose() * b0) * &inv)
        })
        .collect::<Result<Vec<_>>>()?;
    CriticalForms::new(forms)
}

/// Turaev torsion of `ms` for the Euler structure `e`, starting from the base form `b0`.
pub fn turaev_torsion(
    ms: &MorseSystem,
    rep: &Representation,
    e: &EulerStructure,
    b0: &CMatrix,
    h: &CohomologyData,
) -> Result<C64> {
    let chi = ms.euler_characteristic();
    if chi != 0 {
        return Err(Error::Unsupported(format!("Euler characteristic {chi} is nonzero")));
    }
    let forms = transported_forms(ms, rep, e, b0)?;
    milnor_torsion(ms, &forms, h)
}

/// Integer class of a circle Euler structure: `Σ (−1)^{ind x} w_x`, minus one
/// when the seam edge starts at a minimum.
pub fn euler_class_circle(ms: &MorseSystem, e: &EulerStructure) -> Result<i64> {
    let layout = ms
        .circle_layout()
        .ok_or_else(|| Error::Unsupported("Euler classes are only computed for circle systems".into()))?;
    if e.paths.len() != ms.points().len() {
        return Err(Error::Dimension("spider does not match the critical points".into()));
    }
    let w = e.windings();
    let sum: i64 = ms.points().iter().zip(&w).map(|(p, &w)| if p.index % 2 == 0 { w } else { -w }).sum();
    Ok(sum - if layout.seam % 2 == 0 { 1 } else { 0 })
}

/// Ten knots given as braid closures, with their Alexander polynomials.
pub fn knot_corpus() -> Vec<(&'static str, KnotPresentation, Laurent)> {
    let table: [(&str, usize, &[i32], &[i128]); 10] = [
        ("0_1", 2, &[1], &[1]),
        ("3_1", 2, &[1, 1, 1], &[1, -1, 1]),
        ("4_1", 3, &[1, -2, 1, -2], &[1, -3, 1]),
        ("5_1", 2, &[1, 1, 1, 1, 1], &[1, -1, 1, -1, 1]),
        ("5_2", 3, &[1, 1, 1, 2, -1, 2], &[2, -3, 2]),
        ("6_1", 4, &[1, 1, 2, -1, -3, 2, -3], &[2, -5, 2]),
        ("6_2", 3, &[1, 1, 1, -2, 1, -2], &[1, -3, 3, -3, 1]),
        ("6_3", 3, &[1, 1, -2, 1, -2, -2], &[1, -3, 5, -3, 1]),
        ("7_1", 2, &[1, 1, 1, 1, 1, 1, 1], &[1, -1, 1, -1, 1, -1, 1]),
        ("8_19", 3, &[1, 2, 1, 2, 1, 2, 1, 2], &[1, -1, 0, 1, 0, -1, 1]),
    ];
    table
        .iter()
        .map(|&(name, n, braid, poly)| {
            let p = KnotPresentation::from_braid(n, braid).expect("corpus braids are valid");
            (name, p, Laurent::from_coeffs(0, poly.to_vec()))
        })
        .collect()
}
