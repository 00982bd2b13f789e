//! Symmetric bilinear torsion of a finite cochain complex.
//!
//! Given `0 → C⁰ → C¹ → … → Cⁿ → 0` with a nondegenerate symmetric bilinear
//! form on each `Cⁱ`, the forms induce a bilinear form on `det C`, which the
//! canonical isomorphism `det C ≅ det H` carries to `det H`. Evaluated on the
//! generator of `det H` picked out by a choice of cohomology representatives,
//! that form is a single complex number.
//!
//! Concretely, in each degree we pick `ãᵢ ⊂ Cⁱ` on which `∂ᵢ` is injective
//! with image `im ∂ᵢ`, and assemble the basis `vᵢ = (∂ãᵢ₋₁ | h̃ᵢ | ãᵢ)`. The
//! torsion is `∏ᵢ det(vᵢᵀ Gᵢ vᵢ)^{(−1)ⁱ}`. Changing `ãᵢ` or the lifts `h̃ᵢ`
//! multiplies consecutive Gram determinants by the same square, which
//! cancels in the alternating product.
//!
//! With this convention the two-term complex `C → C` with `∂ = a` and unit
//! forms has torsion `a⁻²`.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::numkernel::{bilinear_orthonormalize_with, inverse, lu_det, rank_reveal, solve, CMatrix, C64};
use crate::random::{random_matrix, rng_from_seed};

/// A finite cochain complex of complex vector spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedComplex {
    dims: Vec<usize>,
    differentials: Vec<CMatrix>,
}

impl GradedComplex {
    /// `differentials[i]` maps `C^i → C^{i+1}` and has shape `dims[i+1] × dims[i]`.
    pub fn new(dims: Vec<usize>, differentials: Vec<CMatrix>) -> Result<Self> {
        Self::new_with(dims, differentials, &Tolerances::default())
    }

    pub fn new_with(dims: Vec<usize>, differentials: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Dimension("complex needs at least one degree".into()));
        }
        if differentials.len() + 1 != dims.len() {
            return Err(Error::Dimension(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                differentials.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.rows() != dims[i + 1] || d.cols() != dims[i] {
                return Err(Error::Dimension(format!(
                    "differential {i} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        for i in 0..differentials.len().saturating_sub(1) {
            let prod = &differentials[i + 1] * &differentials[i];
            let scale = differentials[i + 1].max_abs().max(1.0) * differentials[i].max_abs().max(1.0);
            let defect = prod.max_abs();
            if defect > tol.complex_defect * scale {
                return Err(Error::NotAComplex { degree: i, defect });
            }
        }
        Ok(GradedComplex { dims, differentials })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn degrees(&self) -> usize {
        self.dims.len()
    }

    pub fn differential(&self, i: usize) -> &CMatrix {
        &self.differentials[i]
    }

    pub fn differentials(&self) -> &[CMatrix] {
        &self.differentials
    }

    /// `∂ᵢ` as a matrix, with the zero maps at the ends made explicit.
    fn diff_or_zero(&self, i: isize) -> CMatrix {
        let n = self.dims.len() as isize;
        if i < 0 {
            CMatrix::zeros(self.dims[0], 0)
        } else if i >= n - 1 {
            CMatrix::zeros(0, self.dims[i as usize])
        } else {
            self.differentials[i as usize].clone()
        }
    }

    /// Direct sum of two complexes with the same number of degrees.
    pub fn direct_sum(&self, other: &GradedComplex) -> Result<GradedComplex> {
        if self.degrees() != other.degrees() {
            return Err(Error::Dimension("direct sum of complexes of different length".into()));
        }
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let diffs = self
            .differentials
            .iter()
            .zip(&other.differentials)
            .map(|(a, b)| CMatrix::block_diag(&[a.clone(), b.clone()]))
            .collect();
        GradedComplex::new(dims, diffs)
    }
}

/// Per-degree symmetric nondegenerate Gram matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearStructure {
    grams: Vec<CMatrix>,
}

impl BilinearStructure {
    pub fn new(grams: Vec<CMatrix>) -> Result<Self> {
        Self::new_with(grams, &Tolerances::default())
    }

    pub fn new_with(grams: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        for (i, g) in grams.iter().enumerate() {
            if !g.is_square() {
                return Err(Error::Dimension(format!("Gram {i} is not square")));
            }
            let scale = g.max_abs();
            if g.rows() > 0 && g.symmetry_defect() > tol.symmetry * scale.max(1.0) {
                return Err(Error::NotSymmetric(g.symmetry_defect()));
            }
            if g.rows() > 0 && rank_reveal(g, tol.rank).rank < g.rows() {
                return Err(Error::Degenerate(format!("Gram matrix in degree {i}")));
            }
        }
        Ok(BilinearStructure { grams })
    }

    /// Identity forms matching the dimensions of `c`.
    pub fn standard(c: &GradedComplex) -> Self {
        BilinearStructure { grams: c.dims().iter().map(|&n| CMatrix::identity(n)).collect() }
    }

    pub fn grams(&self) -> &[CMatrix] {
        &self.grams
    }

    pub fn gram(&self, i: usize) -> &CMatrix {
        &self.grams[i]
    }

    /// The forms `b'ᵢ(x, y) = bᵢ(Aᵢx, Aᵢy)`, i.e. `G'ᵢ = AᵢᵀGᵢAᵢ`.
    pub fn pulled_back(&self, automorphisms: &[CMatrix]) -> Result<Self> {
        if automorphisms.len() != self.grams.len() {
            return Err(Error::Dimension("one automorphism per degree required".into()));
        }
        let grams = self
            .grams
            .iter()
            .zip(automorphisms)
            .map(|(g, a)| Ok(&(&a.transpose() * g) * a))
            .collect::<Result<Vec<_>>>()?;
        Ok(BilinearStructure { grams })
    }

    pub fn direct_sum(&self, other: &BilinearStructure) -> BilinearStructure {
        BilinearStructure {
            grams: self
                .grams
                .iter()
                .zip(&other.grams)
                .map(|(a, b)| CMatrix::block_diag(&[a.clone(), b.clone()]))
                .collect(),
        }
    }

    fn check_against(&self, c: &GradedComplex) -> Result<()> {
        if self.grams.len() != c.degrees() || self.grams.iter().zip(c.dims()).any(|(g, &n)| g.rows() != n) {
            return Err(Error::Dimension("bilinear structure does not match the complex".into()));
        }
        Ok(())
    }
}

/// Cohomology representatives: column `j` of `bases[i]` is a cocycle in `Cⁱ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CohomologyData {
    bases: Vec<CMatrix>,
}

impl CohomologyData {
    pub fn new(bases: Vec<CMatrix>) -> Self {
        CohomologyData { bases }
    }

    pub fn bases(&self) -> &[CMatrix] {
        &self.bases
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.cols()).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.bases.iter().all(|b| b.cols() == 0)
    }

    /// Scale the representatives in degree `i` by `s`.
    pub fn scaled(&self, i: usize, s: C64) -> Self {
        let mut out = self.clone();
        out.bases[i] = out.bases[i].scale(s);
        out
    }

    pub fn direct_sum(&self, other: &CohomologyData) -> CohomologyData {
        CohomologyData {
            bases: self
                .bases
                .iter()
                .zip(&other.bases)
                .map(|(a, b)| CMatrix::block_diag(&[a.clone(), b.clone()]))
                .collect(),
        }
    }
}

/// Per-degree data reused by the torsion computation.
struct Splitting {
    /// Columns on which `∂ᵢ` is injective, spanning a complement of `ker ∂ᵢ`.
    lifts: Vec<CMatrix>,
    /// Kernel bases.
    kernels: Vec<CMatrix>,
}

fn splitting(c: &GradedComplex, tol: &Tolerances) -> Splitting {
    let mut lifts = Vec::new();
    let mut kernels = Vec::new();
    for i in 0..c.degrees() {
        let d = c.diff_or_zero(i as isize);
        let n = c.dims()[i];
        if d.rows() == 0 || n == 0 {
            lifts.push(CMatrix::zeros(n, 0));
            kernels.push(CMatrix::identity(n));
            continue;
        }
        let rr = rank_reveal(&d, tol.rank);
        let mut a = CMatrix::zeros(n, rr.rank);
        for (k, &j) in rr.pivot_cols.iter().enumerate() {
            a[(j, k)] = C64::new(1.0, 0.0);
        }
        lifts.push(a);
        kernels.push(rr.kernel);
    }
    Splitting { lifts, kernels }
}

/// Dimensions and representatives of `H*(C, ∂)`.
pub fn cohomology(c: &GradedComplex) -> CohomologyData {
    cohomology_with(c, &Tolerances::default())
}

pub fn cohomology_with(c: &GradedComplex, tol: &Tolerances) -> CohomologyData {
    let sp = splitting(c, tol);
    let mut bases = Vec::new();
    for i in 0..c.degrees() {
        let n = c.dims()[i];
        let boundary = if i == 0 { CMatrix::zeros(n, 0) } else { &c.differentials[i - 1] * &sp.lifts[i - 1] };
        let k = &sp.kernels[i];
        // Greedily extend the coboundaries by kernel vectors.
        let mut chosen = boundary.clone();
        let mut reps = Vec::new();
        for j in 0..k.cols() {
            let col = k.columns(j..j + 1);
            let trial = CMatrix::hcat(&[&chosen, &col], n).unwrap();
            if rank_reveal(&trial, tol.rank).rank == trial.cols() {
                chosen = trial;
                reps.push(j);
            }
        }
        let mut h = CMatrix::zeros(n, reps.len());
        for (a, &j) in reps.iter().enumerate() {
            h.set_col(a, &k.col(j));
        }
        bases.push(h);
    }
    CohomologyData { bases }
}

/// How the complements `ãᵢ` and cocycle lifts are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LiftChoice {
    /// Standard basis vectors at the pivot columns of each differential.
    Canonical,
    /// Random invertible recombination plus random kernel and coboundary
    /// admixtures, drawn from the given seed.
    Randomized(u64),
}

fn validate_cohomology(c: &GradedComplex, h: &CohomologyData, tol: &Tolerances) -> Result<CohomologyData> {
    let expected = cohomology_with(c, tol).dims();
    if h.bases.len() != c.degrees() {
        return Err(Error::Cohomology(format!(
            "{} degrees of representatives for {} degrees",
            h.bases.len(),
            c.degrees()
        )));
    }
    if h.dims() != expected {
        return Err(Error::Cohomology(format!("representative counts {:?}, cohomology dims {:?}", h.dims(), expected)));
    }
    let sp = splitting(c, tol);
    let mut bases = Vec::new();
    for i in 0..c.degrees() {
        let hb = &h.bases[i];
        if hb.rows() != c.dims()[i] {
            return Err(Error::Cohomology(format!("representatives in degree {i} have wrong length")));
        }
        if hb.cols() == 0 {
            bases.push(hb.clone());
            continue;
        }
        let d = c.diff_or_zero(i as isize);
        let residual = (&d * hb).max_abs();
        let scale = d.max_abs().max(1.0) * hb.max_abs().max(1.0);
        if residual > tol.cocycle * scale {
            return Err(Error::Cohomology(format!(
                "degree {i} representative is not a cocycle (residual {residual:.3e})"
            )));
        }
        // Re-project onto the kernel: least squares in the kernel basis.
        let k = &sp.kernels[i];
        let kh = k.adjoint();
        let coeffs = solve(&(&kh * k), &(&kh * hb))?;
        let projected = k * &coeffs;
        // Independence modulo coboundaries.
        let boundary = if i == 0 { CMatrix::zeros(hb.rows(), 0) } else { &c.differentials[i - 1] * &sp.lifts[i - 1] };
        let all = CMatrix::hcat(&[&boundary, &projected], hb.rows())?;
        if rank_reveal(&all, tol.rank).rank < all.cols() {
            return Err(Error::Cohomology(format!("degree {i} representatives are dependent modulo coboundaries")));
        }
        bases.push(projected);
    }
    Ok(CohomologyData { bases })
}

/// Per-degree bases `vᵢ = (∂ãᵢ₋₁ | h̃ᵢ | ãᵢ)`.
fn adapted_bases(c: &GradedComplex, h: &CohomologyData, choice: LiftChoice, tol: &Tolerances) -> Result<Vec<CMatrix>> {
    let sp = splitting(c, tol);
    let mut lifts = sp.lifts.clone();
    let mut reps = h.bases.clone();
    if let LiftChoice::Randomized(seed) = choice {
        let mut rng = rng_from_seed(seed);
        for i in 0..c.degrees() {
            let r = lifts[i].cols();
            if r > 0 {
                let m = loop {
                    let m = random_matrix(&mut rng, r, r);
                    if lu_det(&m)?.norm() > 0.1 {
                        break m;
                    }
                };
                let k = &sp.kernels[i];
                let mix = k * &random_matrix(&mut rng, k.cols(), r);
                lifts[i] = &(&lifts[i] * &m) + &mix;
            }
            if i > 0 && reps[i].cols() > 0 {
                let b = &c.differentials[i - 1] * &sp.lifts[i - 1];
                let shift = &b * &random_matrix(&mut rng, b.cols(), reps[i].cols());
                reps[i] = &reps[i] + &shift;
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..c.degrees() {
        let n = c.dims()[i];
        let image = if i == 0 { CMatrix::zeros(n, 0) } else { &c.differentials[i - 1] * &lifts[i - 1] };
        let v = CMatrix::hcat(&[&image, &reps[i], &lifts[i]], n)?;
        if v.cols() != n {
            return Err(Error::Cohomology(format!(
                "degree {i}: adapted basis has {} vectors for dimension {n}",
                v.cols()
            )));
        }
        out.push(v);
    }
    Ok(out)
}

/// The symmetric bilinear torsion of `(c, b)` evaluated on the generator of
/// `det H` given by the representatives `h`.
pub fn torsion_form(c: &GradedComplex, b: &BilinearStructure, h: &CohomologyData) -> Result<C64> {
    torsion_form_with(c, b, h, LiftChoice::Canonical, &Tolerances::default())
}

pub fn torsion_form_with(
    c: &GradedComplex,
    b: &BilinearStructure,
    h: &CohomologyData,
    choice: LiftChoice,
    tol: &Tolerances,
) -> Result<C64> {
    b.check_against(c)?;
    let h = validate_cohomology(c, h, tol)?;
    let bases = adapted_bases(c, &h, choice, tol)?;
    let mut result = C64::new(1.0, 0.0);
    for (i, v) in bases.iter().enumerate() {
        if v.cols() == 0 {
            continue;
        }
        if rank_reveal(v, tol.rank).rank < v.cols() {
            return Err(Error::Conditioning { degree: i });
        }
        let gram = &(&v.transpose() * b.gram(i)) * v;
        let det = lu_det(&gram)?;
        if det.norm() == 0.0 || !det.norm().is_finite() {
            return Err(Error::Conditioning { degree: i });
        }
        if i % 2 == 0 {
            result *= det;
        } else {
            result /= det;
        }
    }
    Ok(result)
}

/// Same quantity computed in `b`-orthonormal frames: with `SᵢᵀGᵢSᵢ = I`,
/// `det(vᵢᵀGᵢvᵢ) = det(Sᵢ⁻¹vᵢ)²`.
pub fn torsion_form_orthonormal(c: &GradedComplex, b: &BilinearStructure, h: &CohomologyData) -> Result<C64> {
    let tol = Tolerances::default();
    b.check_against(c)?;
    let h = validate_cohomology(c, h, &tol)?;
    let bases = adapted_bases(c, &h, LiftChoice::Canonical, &tol)?;
    let mut result = C64::new(1.0, 0.0);
    for (i, v) in bases.iter().enumerate() {
        if v.cols() == 0 {
            continue;
        }
        let s = bilinear_orthonormalize_with(b.gram(i), &tol)?;
        let coords = &inverse(&s)? * v;
        let d = lu_det(&coords)?;
        let sq = d * d;
        if i % 2 == 0 {
            result *= sq;
        } else {
            result /= sq;
        }
    }
    Ok(result)
}

/// Predicted ratio `∏ᵢ det(Aᵢ)^{2(−1)ⁱ}` for the change of forms `b ↦ b(A·, A·)`.
pub fn anomaly_ratio(c: &GradedComplex, b: &BilinearStructure, automorphisms: &[CMatrix]) -> Result<C64> {
    b.check_against(c)?;
    if automorphisms.len() != c.degrees() {
        return Err(Error::Dimension("one automorphism per degree required".into()));
    }
    let mut r = C64::new(1.0, 0.0);
    for (i, a) in automorphisms.iter().enumerate() {
        if a.rows() != c.dims()[i] || !a.is_square() {
            return Err(Error::Dimension(format!("automorphism {i} has the wrong shape")));
        }
        if a.rows() == 0 {
            continue;
        }
        let d = lu_det(a)?;
        if d.norm() <= 1e-300 || rank_reveal(a, 1e-12).rank < a.rows() {
            return Err(Error::NotInvertible(i));
        }
        if i % 2 == 0 {
            r *= d * d;
        } else {
            r /= d * d;
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::c as cx;

    fn two_term(a: f64) -> GradedComplex {
        GradedComplex::new(vec![1, 1], vec![CMatrix::from_real(1, 1, &[a]).unwrap()]).unwrap()
    }

    #[test]
    fn acyclic_two_term_has_no_cohomology() {
        let h = cohomology(&two_term(1.0));
        assert_eq!(h.dims(), vec![0, 0]);
    }

    #[test]
    fn zero_differential_cohomology_is_everything() {
        let c = GradedComplex::new(vec![2, 3], vec![CMatrix::zeros(3, 2)]).unwrap();
        assert_eq!(cohomology(&c).dims(), vec![2, 3]);
    }

    #[test]
    fn two_term_convention_is_inverse_square() {
        let c = two_term(3.0);
        let b = BilinearStructure::standard(&c);
        let t = torsion_form(&c, &b, &cohomology(&c)).unwrap();
        assert!((t - cx(1.0 / 9.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_differential_unit_forms_give_one() {
        let c = GradedComplex::new(vec![2, 3], vec![CMatrix::zeros(3, 2)]).unwrap();
        let h = CohomologyData::new(vec![CMatrix::identity(2), CMatrix::identity(3)]);
        let t = torsion_form(&c, &BilinearStructure::standard(&c), &h).unwrap();
        assert!((t - cx(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn scaling_representatives_scales_by_alternating_square() {
        let c = GradedComplex::new(vec![2, 3], vec![CMatrix::zeros(3, 2)]).unwrap();
        let h = CohomologyData::new(vec![CMatrix::identity(2), CMatrix::identity(3)]);
        let b = BilinearStructure::standard(&c);
        let base = torsion_form(&c, &b, &h).unwrap();
        let s = cx(1.5, -0.5);
        // Scaling every representative in degree 0 multiplies det by s^2 per vector.
        let t0 = torsion_form(&c, &b, &h.scaled(0, s)).unwrap();
        assert!((t0 / base - s.powi(4)).norm() < 1e-12);
        let t1 = torsion_form(&c, &b, &h.scaled(1, s)).unwrap();
        assert!((t1 / base - s.powi(-6)).norm() < 1e-12);
    }

    #[test]
    fn single_degree_anomaly() {
        let c = GradedComplex::new(vec![2], vec![]).unwrap();
        let b = BilinearStructure::standard(&c);
        let a = CMatrix::diag(&[cx(2.0, 0.0), cx(1.0, 0.0)]);
        let r = anomaly_ratio(&c, &b, &[a.clone()]).unwrap();
        assert!((r - cx(4.0, 0.0)).norm() < 1e-15);
        let h = cohomology(&c);
        let t = torsion_form(&c, &b, &h).unwrap();
        let t2 = torsion_form(&c, &b.pulled_back(&[a]).unwrap(), &h).unwrap();
        assert!((t2 / t - r).norm() < 1e-12);
    }

    #[test]
    fn identity_automorphisms_give_one() {
        let c = two_term(2.0);
        let b = BilinearStructure::standard(&c);
        let r = anomaly_ratio(&c, &b, &[CMatrix::identity(1), CMatrix::identity(1)]).unwrap();
        assert_eq!(r, cx(1.0, 0.0));
    }

    #[test]
    fn singular_automorphism_rejected() {
        let c = two_term(2.0);
        let b = BilinearStructure::standard(&c);
        let err = anomaly_ratio(&c, &b, &[CMatrix::zeros(1, 1), CMatrix::identity(1)]).unwrap_err();
        assert_eq!(err, Error::NotInvertible(0));
    }

    #[test]
    fn non_complex_rejected() {
        let d0 = CMatrix::from_real(1, 1, &[1.0]).unwrap();
        let d1 = CMatrix::from_real(1, 1, &[1.0]).unwrap();
        assert!(matches!(GradedComplex::new(vec![1, 1, 1], vec![d0, d1]), Err(Error::NotAComplex { .. })));
    }

    #[test]
    fn wrong_representative_count_rejected() {
        let c = two_term(2.0);
        let h = CohomologyData::new(vec![CMatrix::identity(1), CMatrix::zeros(1, 0)]);
        let err = torsion_form(&c, &BilinearStructure::standard(&c), &h).unwrap_err();
        assert!(matches!(err, Error::Cohomology(_)));
    }

    #[test]
    fn orthonormal_route_agrees() {
        let c = two_term(3.0);
        let g0 = CMatrix::from_real(1, 1, &[2.0]).unwrap();
        let g1 = CMatrix::from_vec(1, 1, vec![cx(0.5, 1.0)]).unwrap();
        let b = BilinearStructure::new(vec![g0, g1]).unwrap();
        let h = cohomology(&c);
        let t1 = torsion_form(&c, &b, &h).unwrap();
        let t2 = torsion_form_orthonormal(&c, &b, &h).unwrap();
        assert!((t1 - t2).norm() < 1e-13 * t1.norm());
    }
}
