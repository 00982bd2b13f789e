use bilinear_torsion::complex_torsion::{
    anomaly_ratio, cohomology, torsion_form, torsion_form_orthonormal, torsion_form_with, BilinearStructure,
    CohomologyData, GradedComplex, LiftChoice,
};
use bilinear_torsion::numkernel::{eigenvalues, inverse, lu_det};
use bilinear_torsion::random::{random_invertible, random_matrix, random_symmetric_form, rng_from_seed};
use bilinear_torsion::{c, CMatrix, Tolerances, C64};
use proptest::prelude::*;

/// Determinant by cofactor expansion along the first row.
fn cofactor_det(m: &CMatrix) -> C64 {
    let n = m.rows();
    if n == 0 {
        return c(1.0, 0.0);
    }
    if n == 1 {
        return m[(0, 0)];
    }
    let mut total = c(0.0, 0.0);
    for j in 0..n {
        let minor = CMatrix::from_fn(n - 1, n - 1, |r, s| m[(r + 1, if s < j { s } else { s + 1 })]);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        total += m[(0, j)] * cofactor_det(&minor) * sign;
    }
    total
}

/// Characteristic polynomial coefficients `[c_0, ..., c_n]` of `det(zI - M)`
/// by the Faddeev-LeVerrier recursion.
fn char_poly(m: &CMatrix) -> Vec<C64> {
    let n = m.rows();
    let mut coeffs = vec![c(0.0, 0.0); n + 1];
    coeffs[n] = c(1.0, 0.0);
    let mut mk = CMatrix::zeros(n, n);
    for k in 1..=n {
        let shifted = &mk + &CMatrix::identity(n).scale(coeffs[n - k + 1]);
        mk = m * &shifted;
        let trace: C64 = (0..n).map(|i| mk[(i, i)]).sum();
        coeffs[n - k] = -trace / k as f64;
    }
    coeffs
}

fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * z + a)
}

fn indicator(b: bool) -> C64 {
    c(f64::from(u8::from(b)), 0.0)
}

struct Built {
    complex: GradedComplex,
    forms: BilinearStructure,
    reps: CohomologyData,
    expected: C64,
}

/// Degree `i` is `Bᵢ ⊕ Hᵢ ⊕ Aᵢ` in standard coordinates with `∂ᵢ` the identity
/// `Aᵢ → Bᵢ₊₁`, then conjugated by random `Pᵢ`. The adapted basis is `Pᵢ`
/// itself, so the torsion is `∏ (det Pᵢ² det Gᵢ)^{(−1)ⁱ}`.
fn build(betti: &[usize], ranks: &[usize], seed: u64) -> Built {
    let n = betti.len();
    let mut rng = rng_from_seed(seed);
    let rank_in = |i: usize| if i == 0 { 0 } else { ranks[i - 1] };
    let rank_out = |i: usize| if i + 1 == n { 0 } else { ranks[i] };
    let dims: Vec<usize> = (0..n).map(|i| rank_in(i) + betti[i] + rank_out(i)).collect();
    let p: Vec<CMatrix> = dims.iter().map(|&d| random_invertible(&mut rng, d)).collect();
    let grams: Vec<CMatrix> = dims.iter().map(|&d| random_symmetric_form(&mut rng, d)).collect();
    let mut diffs = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let off = rank_in(i) + betti[i];
        let raw = CMatrix::from_fn(dims[i + 1], dims[i], |r, s| indicator(s >= off && r == s - off));
        diffs.push(&(&p[i + 1] * &raw) * &inverse(&p[i]).unwrap());
    }
    let reps = CohomologyData::new(
        (0..n).map(|i| &p[i] * &CMatrix::from_fn(dims[i], betti[i], |r, s| indicator(r == rank_in(i) + s))).collect(),
    );
    let mut expected = c(1.0, 0.0);
    for i in 0..n {
        let dp = cofactor_det(&p[i]);
        let term = dp * dp * cofactor_det(&grams[i]);
        if i % 2 == 0 {
            expected *= term;
        } else {
            expected /= term;
        }
    }
    Built {
        complex: GradedComplex::new(dims, diffs).unwrap(),
        forms: BilinearStructure::new(grams).unwrap(),
        reps,
        expected,
    }
}

fn shape() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, u64)> {
    (1usize..=4).prop_flat_map(|n| {
        (
            proptest::collection::vec(0usize..=2, n),
            proptest::collection::vec(0usize..=2, n.saturating_sub(1)),
            any::<u64>(),
        )
    })
}

fn close(a: C64, b: C64, rel: f64) -> bool {
    (a - b).norm() <= rel * b.norm().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn torsion_matches_block_oracle((betti, ranks, seed) in shape()) {
        let b = build(&betti, &ranks, seed);
        let t = torsion_form(&b.complex, &b.forms, &b.reps).unwrap();
        prop_assert!(close(t, b.expected, 1e-8), "{t} vs {}", b.expected);
    }

    #[test]
    fn lift_choice_is_irrelevant((betti, ranks, seed) in shape(), lift_seed in any::<u64>()) {
        let b = build(&betti, &ranks, seed);
        let t0 = torsion_form(&b.complex, &b.forms, &b.reps).unwrap();
        let t1 = torsion_form_with(&b.complex, &b.forms, &b.reps, LiftChoice::Randomized(lift_seed), &Tolerances::default()).unwrap();
        prop_assert!(close(t0, t1, 1e-8));
    }

    #[test]
    fn orthonormal_frames_agree((betti, ranks, seed) in shape()) {
        let b = build(&betti, &ranks, seed);
        let t0 = torsion_form(&b.complex, &b.forms, &b.reps).unwrap();
        let t1 = torsion_form_orthonormal(&b.complex, &b.forms, &b.reps).unwrap();
        prop_assert!(close(t0, t1, 1e-8));
    }

    #[test]
    fn change_of_forms((betti, ranks, seed) in shape()) {
        let b = build(&betti, &ranks, seed);
        let mut rng = rng_from_seed(seed ^ 0x5eed);
        let autos: Vec<CMatrix> = b.complex.dims().iter().map(|&d| random_invertible(&mut rng, d)).collect();
        let t0 = torsion_form(&b.complex, &b.forms, &b.reps).unwrap();
        let t1 = torsion_form(&b.complex, &b.forms.pulled_back(&autos).unwrap(), &b.reps).unwrap();
        let mut predicted = c(1.0, 0.0);
        for (i, a) in autos.iter().enumerate() {
            let d = cofactor_det(a);
            if i % 2 == 0 { predicted *= d * d } else { predicted /= d * d }
        }
        prop_assert!(close(t1 / t0, predicted, 1e-8));
        prop_assert!(close(anomaly_ratio(&b.complex, &b.forms, &autos).unwrap(), predicted, 1e-10));
    }

    #[test]
    fn rescaled_cohomology((betti, ranks, seed) in shape(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let s = c(re, im);
        prop_assume!(s.norm() > 0.1);
        let b = build(&betti, &ranks, seed);
        let t0 = torsion_form(&b.complex, &b.forms, &b.reps).unwrap();
        for i in 0..betti.len() {
            let t1 = torsion_form(&b.complex, &b.forms, &b.reps.scaled(i, s)).unwrap();
            let e = 2 * betti[i] as i32;
            let factor = if i % 2 == 0 { s.powi(e) } else { s.powi(-e) };
            prop_assert!(close(t1, t0 * factor, 1e-8));
        }
    }

    #[test]
    fn lu_matches_cofactor(n in 1usize..=6, seed in any::<u64>()) {
        let m = random_matrix(&mut rng_from_seed(seed), n, n);
        prop_assert!(close(lu_det(&m).unwrap(), cofactor_det(&m), 1e-11));
    }

    #[test]
    fn eigenvalues_are_roots(n in 1usize..=7, seed in any::<u64>()) {
        let m = random_matrix(&mut rng_from_seed(seed), n, n);
        let ev = eigenvalues(&m).unwrap();
        prop_assert_eq!(ev.len(), n);
        let p = char_poly(&m);
        let scale: f64 = p.iter().map(|a| a.norm()).sum();
        for &z in &ev {
            let zs: f64 = (0..=n).map(|k| z.norm().powi(k as i32)).sum();
            prop_assert!(horner(&p, z).norm() <= 1e-10 * scale * zs);
        }
        let prod = ev.iter().fold(c(1.0, 0.0), |a, &z| a * z);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(close(prod, p[0] * sign, 1e-9));
    }
}

#[test]
fn direct_sum_multiplies() {
    let a = build(&[1, 0, 1], &[1, 2], 3);
    let b = build(&[0, 2, 0], &[2, 1], 4);
    let t = torsion_form(
        &a.complex.direct_sum(&b.complex).unwrap(),
        &a.forms.direct_sum(&b.forms),
        &a.reps.direct_sum(&b.reps),
    )
    .unwrap();
    assert!(close(t, a.expected * b.expected, 1e-9));
}

#[test]
fn two_term_example() {
    let complex = GradedComplex::new(vec![1, 1], vec![CMatrix::from_real(1, 1, &[3.0]).unwrap()]).unwrap();
    let forms = BilinearStructure::standard(&complex);
    let t = torsion_form(&complex, &forms, &cohomology(&complex)).unwrap();
    assert!((t - c(1.0 / 9.0, 0.0)).norm() < 1e-15);
}

#[test]
fn wrong_cohomology_dimension_rejected() {
    let b = build(&[1, 1], &[1], 9);
    let bad = CohomologyData::new(vec![CMatrix::zeros(b.complex.dims()[0], 0), b.reps.bases()[1].clone()]);
    assert!(torsion_form(&b.complex, &b.forms, &bad).is_err());
}
