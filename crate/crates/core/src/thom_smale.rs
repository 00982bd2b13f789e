//! Thom-Smale complexes of Morse systems with flat-bundle coefficients, and
//! the Milnor bilinear torsion.
//!
//! A [`MorseSystem`] is purely combinatorial: critical points with their
//! indices, and instantons from an index `i + 1` point to an index `i` point
//! carrying a sign and a holonomy matrix. Orientations enter only through
//! the signs.
//!
//! The chain differential sends `x` to `Σ_γ n_γ τ_γ y`. The cochain
//! coboundary used here is its literal transpose: the block from an index `i`
//! point `y` to an index `i + 1` point `x` is `Σ_γ n_γ τ_γᵀ` over the
//! instantons `γ` from `x` to `y`.

use serde::{Deserialize, Serialize};

use crate::complex_torsion::{torsion_form, BilinearStructure, CohomologyData, GradedComplex};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::numkernel::{inverse, lu_det, CMatrix, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub label: String,
    pub index: usize,
}

/// A gradient trajectory from `from` (index `i + 1`) down to `to` (index `i`).
#[derive(Debug, Clone, PartialEq)]
pub struct Instanton {
    pub from: usize,
    pub to: usize,
    pub sign: i8,
    pub holonomy: CMatrix,
}

/// Where a circle-shaped system came from, so Euler classes can be read off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleLayout {
    pub pairs: usize,
    pub seam: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MorseSystem {
    rank: usize,
    points: Vec<CriticalPoint>,
    instantons: Vec<Instanton>,
    layout: Option<CircleLayout>,
}

impl MorseSystem {
    pub fn new(rank: usize, points: Vec<CriticalPoint>, instantons: Vec<Instanton>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Morse("bundle rank must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::Morse("no critical points".into()));
        }
        for (k, g) in instantons.iter().enumerate() {
            let (Some(x), Some(y)) = (points.get(g.from), points.get(g.to)) else {
                return Err(Error::Morse(format!("instanton {k} refers to a missing critical point")));
            };
            if x.index != y.index + 1 {
                return Err(Error::Morse(format!(
                    "instanton {k} from `{}` (index {}) to `{}` (index {}) violates the index relation",
                    x.label, x.index, y.label, y.index
                )));
            }
            if g.sign != 1 && g.sign != -1 {
                return Err(Error::Morse(format!("instanton {k} has sign {}", g.sign)));
            }
            if g.holonomy.rows() != rank || !g.holonomy.is_square() {
                return Err(Error::Morse(format!("instanton {k} holonomy is not {rank}x{rank}")));
            }
        }
        let ms = MorseSystem { rank, points, instantons, layout: None };
        ms.check_square_zero()?;
        Ok(ms)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn points(&self) -> &[CriticalPoint] {
        &self.points
    }

    pub fn instantons(&self) -> &[Instanton] {
        &self.instantons
    }

    pub fn circle_layout(&self) -> Option<CircleLayout> {
        self.layout
    }

    pub fn top_index(&self) -> usize {
        self.points.iter().map(|p| p.index).max().unwrap_or(0)
    }

    /// `M_i`, the number of critical points of each index.
    pub fn index_counts(&self) -> Vec<usize> {
        let mut m = vec![0; self.top_index() + 1];
        for p in &self.points {
            m[p.index] += 1;
        }
        m
    }

    /// `rk · Σ (−1)^{ind x}`.
    pub fn euler_characteristic(&self) -> i64 {
        self.rank as i64 * self.points.iter().map(|p| sign(p.index)).sum::<i64>()
    }

    /// `rk · Σ (−1)^{ind x} ind x`.
    pub fn chi_prime(&self) -> i64 {
        self.rank as i64 * self.points.iter().map(|p| sign(p.index) * p.index as i64).sum::<i64>()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p.label == label)
    }

    /// Offset of each point inside its degree, in units of the rank.
    fn slots(&self) -> Vec<usize> {
        let mut next = vec![0; self.top_index() + 1];
        self.points
            .iter()
            .map(|p| {
                let s = next[p.index];
                next[p.index] += 1;
                s
            })
            .collect()
    }

    fn coboundaries(&self) -> Vec<CMatrix> {
        let m = self.index_counts();
        let r = self.rank;
        let slots = self.slots();
        let mut d: Vec<CMatrix> =
            (0..m.len().saturating_sub(1)).map(|i| CMatrix::zeros(r * m[i + 1], r * m[i])).collect();
        for g in &self.instantons {
            let i = self.points[g.to].index;
            let (row0, col0) = (slots[g.from] * r, slots[g.to] * r);
            let t = g.holonomy.transpose();
            for a in 0..r {
                for b in 0..r {
                    d[i][(row0 + a, col0 + b)] += t[(a, b)] * g.sign as f64;
                }
            }
        }
        d
    }

    fn check_square_zero(&self) -> Result<()> {
        let d = self.coboundaries();
        let r = self.rank;
        let by_index: Vec<Vec<usize>> = (0..=self.top_index())
            .map(|i| (0..self.points.len()).filter(|&k| self.points[k].index == i).collect())
            .collect();
        for i in 0..d.len().saturating_sub(1) {
            let prod = &d[i + 1] * &d[i];
            let scale = d[i + 1].max_abs().max(1.0) * d[i].max_abs().max(1.0);
            for (zs, &z) in by_index[i + 2].iter().enumerate() {
                for (xs, &x) in by_index[i].iter().enumerate() {
                    let mut defect: f64 = 0.0;
                    for a in 0..r {
                        for b in 0..r {
                            defect = defect.max(prod[(zs * r + a, xs * r + b)].norm());
                        }
                    }
                    if defect > 1e-12 * scale {
                        return Err(Error::InconsistentInstantons {
                            from: self.points[x].label.clone(),
                            to: self.points[z].label.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

fn sign(index: usize) -> i64 {
    if index % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Fiberwise forms `b_x`, one per critical point in the order of
/// [`MorseSystem::points`].
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalForms {
    forms: Vec<CMatrix>,
}

impl CriticalForms {
    pub fn new(forms: Vec<CMatrix>) -> Result<Self> {
        let tol = Tolerances::default();
        for (k, b) in forms.iter().enumerate() {
            if !b.is_square() {
                return Err(Error::Dimension(format!("form at point {k} is not square")));
            }
            if b.symmetry_defect() > tol.symmetry * b.max_abs().max(1.0) {
                return Err(Error::NotSymmetric(b.symmetry_defect()));
            }
            let d = lu_det(b)?;
            if d.norm() <= tol.degenerate * b.max_abs().powi(b.rows() as i32).max(f64::MIN_POSITIVE) {
                return Err(Error::Degenerate(format!("form at point {k}")));
            }
        }
        Ok(CriticalForms { forms })
    }

    /// Identity forms on every fiber.
    pub fn standard(ms: &MorseSystem) -> Self {
        CriticalForms { forms: vec![CMatrix::identity(ms.rank()); ms.points().len()] }
    }

    /// Rank-one forms from scalars.
    pub fn scalar(values: &[C64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| CMatrix::diag(&[v])).collect())
    }

    pub fn forms(&self) -> &[CMatrix] {
        &self.forms
    }

    fn check_against(&self, ms: &MorseSystem) -> Result<()> {
        if self.forms.len() != ms.points().len() || self.forms.iter().any(|b| b.rows() != ms.rank()) {
            return Err(Error::Dimension("critical forms do not match the Morse system".into()));
        }
        Ok(())
    }
}

/// The Thom-Smale cochain complex with its critical-point bilinear structure.
pub fn build_thom_smale(ms: &MorseSystem, forms: &CriticalForms) -> Result<(GradedComplex, BilinearStructure)> {
    forms.check_against(ms)?;
    let dims: Vec<usize> = ms.index_counts().iter().map(|m| m * ms.rank()).collect();
    let complex = GradedComplex::new(dims, ms.coboundaries())?;
    let grams = (0..=ms.top_index())
        .map(|i| {
            let blocks: Vec<CMatrix> =
                ms.points().iter().zip(forms.forms()).filter(|(p, _)| p.index == i).map(|(_, b)| b.clone()).collect();
            CMatrix::block_diag(&blocks)
        })
        .collect();
    Ok((complex, BilinearStructure::new(grams)?))
}

/// Milnor bilinear torsion on the generator of `det H` given by `h`.
pub fn milnor_torsion(ms: &MorseSystem, forms: &CriticalForms, h: &CohomologyData) -> Result<C64> {
    let (c, b) = build_thom_smale(ms, forms)?;
    torsion_form(&c, &b, h)
}

/// Predicted ratio `∏_x det(b_x⁻¹ b1_x)^{(−1)^{ind x}}` between the Milnor
/// torsions for two choices of critical forms.
pub fn milnor_anomaly_check(ms: &MorseSystem, forms: &CriticalForms, forms1: &CriticalForms) -> Result<C64> {
    forms.check_against(ms)?;
    forms1.check_against(ms)?;
    let mut r = C64::new(1.0, 0.0);
    for ((p, b), b1) in ms.points().iter().zip(forms.forms()).zip(forms1.forms()) {
        let d = lu_det(&(&inverse(b)? * b1))?;
        if p.index % 2 == 0 {
            r *= d;
        } else {
            r /= d;
        }
    }
    Ok(r)
}

/// Circle height function with `n` minima and `n` maxima and rank-one
/// holonomy `lambda` on the instanton crossing edge `seam`.
///
/// Points `c0 … c(2n−1)` alternate minimum, maximum around the circle. The
/// maximum `c(2j+1)` has an instanton to its left neighbour with sign `−1`
/// and one to its right neighbour with sign `+1`. Edge `s` joins `c(s)` and
/// `c(s+1)`; crossing it to the right multiplies by `lambda`.
pub fn make_circle_morse(n: usize, lambda: C64, seam: usize) -> Result<MorseSystem> {
    make_circle_morse_matrix(n, &CMatrix::diag(&[lambda]), seam)
}

/// As [`make_circle_morse`] with a matrix holonomy.
pub fn make_circle_morse_matrix(n: usize, holonomy: &CMatrix, seam: usize) -> Result<MorseSystem> {
    if n < 1 {
        return Err(Error::Morse("a circle Morse function needs at least one minimum".into()));
    }
    if seam >= 2 * n {
        return Err(Error::Morse(format!("seam edge {seam} out of range for {} points", 2 * n)));
    }
    if !holonomy.is_square() || holonomy.rows() == 0 {
        return Err(Error::Morse("holonomy must be a nonempty square matrix".into()));
    }
    let r = holonomy.rows();
    let lam_inv = inverse(holonomy).map_err(|_| Error::Morse("holonomy is not invertible".into()))?;
    let id = CMatrix::identity(r);
    let points = (0..2 * n).map(|k| CriticalPoint { label: format!("c{k}"), index: k % 2 }).collect();
    let mut instantons = Vec::new();
    for j in 0..n {
        let x = 2 * j + 1;
        let left = 2 * j;
        let right = (2 * j + 2) % (2 * n);
        let left_hol = if seam == left { lam_inv.clone() } else { id.clone() };
        let right_hol = if seam == x { holonomy.clone() } else { id.clone() };
        instantons.push(Instanton { from: x, to: left, sign: -1, holonomy: left_hol });
        instantons.push(Instanton { from: x, to: right, sign: 1, holonomy: right_hol });
    }
    let mut ms = MorseSystem::new(r, points, instantons)?;
    ms.layout = Some(CircleLayout { pairs: n, seam });
    Ok(ms)
}

/// The seam used when none is specified: the edge leaving the last maximum.
pub fn default_seam(n: usize) -> usize {
    2 * n - 1
}
