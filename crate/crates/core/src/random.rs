//! Seeded random complexes, forms and automorphisms.
//!
//! Used by the verification suite and the tests. Entries are drawn uniformly
//! from the square `[-1, 1] × [-1, 1]i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex_torsion::{BilinearStructure, CohomologyData, GradedComplex};
use crate::error::Result;
use crate::numkernel::{lu_det, CMatrix, C64};

pub type TorsionRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> TorsionRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_c64<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| random_c64(rng))
}

/// Identity plus a random perturbation, redrawn until reasonably conditioned.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    loop {
        let m = &CMatrix::identity(n).scale(C64::new(1.5, 0.0)) + &random_matrix(rng, n, n);
        if n == 0 || lu_det(&m).map(|d| d.norm() > 0.2).unwrap_or(false) {
            return m;
        }
    }
}

/// `PᵀP` for a random invertible `P`: symmetric, nondegenerate and
/// generically not Hermitian.
pub fn random_symmetric_form<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let p = random_invertible(rng, n);
    &p.transpose() * &p
}

/// A random complex with prescribed cohomology dimensions.
///
/// In degree `i` the space splits as `im ∂ᵢ₋₁ ⊕ Hⁱ ⊕ Aᵢ`, with `∂ᵢ` the
/// identity from `Aᵢ` onto the image part of degree `i + 1`; the whole
/// thing is then conjugated by random invertible matrices. `ranks[i]` is the
/// rank of `∂ᵢ`.
pub fn random_complex<R: Rng>(rng: &mut R, betti: &[usize], ranks: &[usize]) -> Result<GradedComplex> {
    let (c, _) = random_complex_with_cohomology(rng, betti, ranks)?;
    Ok(c)
}

/// As [`random_complex`], also returning the natural cohomology representatives.
pub fn random_complex_with_cohomology<R: Rng>(
    rng: &mut R,
    betti: &[usize],
    ranks: &[usize],
) -> Result<(GradedComplex, CohomologyData)> {
    let n = betti.len();
    assert_eq!(ranks.len() + 1, n.max(1), "one rank per differential");
    let rank_in = |i: usize| if i == 0 { 0 } else { ranks[i - 1] };
    let rank_out = |i: usize| if i + 1 == n { 0 } else { ranks[i] };
    let dims: Vec<usize> = (0..n).map(|i| rank_in(i) + betti[i] + rank_out(i)).collect();
    let conj: Vec<CMatrix> = dims.iter().map(|&d| random_invertible(rng, d)).collect();
    let mut inv = Vec::new();
    for p in &conj {
        inv.push(crate::numkernel::inverse(p)?);
    }
    let mut diffs = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let r = ranks[i];
        let mut block = CMatrix::zeros(dims[i + 1], dims[i]);
        let off_src = rank_in(i) + betti[i];
        for k in 0..r {
            block[(k, off_src + k)] = C64::new(1.0, 0.0);
        }
        diffs.push(&(&conj[i + 1] * &block) * &inv[i]);
    }
    let mut reps = Vec::new();
    for i in 0..n {
        let mut h = CMatrix::zeros(dims[i], betti[i]);
        for k in 0..betti[i] {
            h[(rank_in(i) + k, k)] = C64::new(1.0, 0.0);
        }
        reps.push(&conj[i] * &h);
    }
    let c = GradedComplex::new_with(dims, diffs, &crate::Tolerances::default().scaled(1e3))?;
    Ok((c, CohomologyData::new(reps)))
}

pub fn random_bilinear<R: Rng>(rng: &mut R, c: &GradedComplex) -> Result<BilinearStructure> {
    BilinearStructure::new(c.dims().iter().map(|&n| random_symmetric_form(rng, n)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex_torsion::cohomology;

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_matrix(&mut rng_from_seed(7), 3, 2);
        let b = random_matrix(&mut rng_from_seed(7), 3, 2);
        assert_eq!(a, b);
    }

    #[test]
    fn random_complex_has_requested_cohomology() {
        let mut rng = rng_from_seed(11);
        let c = random_complex(&mut rng, &[1, 0, 2], &[2, 1]).unwrap();
        assert_eq!(c.dims(), &[3, 3, 3]);
        assert_eq!(cohomology(&c).dims(), vec![1, 0, 2]);
    }

    #[test]
    fn symmetric_forms_are_symmetric() {
        let g = random_symmetric_form(&mut rng_from_seed(3), 4);
        assert!(g.symmetry_defect() < 1e-14);
    }
}
