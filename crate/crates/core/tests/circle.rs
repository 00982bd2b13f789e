use std::f64::consts::PI;

use bilinear_torsion::circle::{
    build_discrete, chain_defect, conjugation_isospectral_check, conjugation_isospectral_check_with,
    exact_spectrum_circle, gelfand_yaglom_det, hurwitz_zeta, rs_torsion, small_spectrum_dims, spectral_mismatch,
    zeta_det_exact, zeta_det_pair, CircleModel, Perturbation, RsMethod, Stencil,
};
use bilinear_torsion::numkernel::eigenvalues;
use bilinear_torsion::{c, Error, C64};

fn close(a: C64, b: C64, rel: f64) -> bool {
    (a - b).norm() <= rel * b.norm().max(1e-300)
}

fn sample_holonomies() -> [C64; 4] {
    [c(2.0, 0.0), C64::from_polar(1.0, PI / 5.0), c(-3.0, 1.0), c(0.4, -0.9)]
}

#[test]
fn hurwitz_special_values() {
    assert!((hurwitz_zeta(2.0, 1.0) - PI * PI / 6.0).abs() < 1e-13);
    assert!((hurwitz_zeta(4.0, 0.5) - 15.0 * PI.powi(4) / 90.0).abs() < 1e-12);
    // ζ(s, a) = ζ(s, a + 1) + a^{−s}
    let (s, a) = (3.5, 0.3);
    assert!((hurwitz_zeta(s, a) - hurwitz_zeta(s, a + 1.0) - a.powf(-s)).abs() < 1e-12);
}

#[test]
fn regularized_product_closed_form() {
    // ∏ (n − w₁)(n − w₂) = 4 sin(πw₁) sin(πw₂)
    for (w1, w2) in [(c(0.3, 0.1), c(0.3, -0.1)), (c(-0.2, 0.4), c(0.2, -0.4)), (c(0.45, 0.0), c(0.1, 0.0))] {
        let expected = (w1 * PI).sin() * (w2 * PI).sin() * 4.0;
        assert!(close(zeta_det_pair(w1, w2), expected, 1e-10), "{w1} {w2}");
    }
}

#[test]
fn zeta_determinant_is_rational_in_holonomy() {
    for lambda in sample_holonomies() {
        for length in [1.0, 2.0 * PI, 7.5] {
            let expected = (lambda - 1.0).powi(2) / lambda;
            for degree in 0..2 {
                assert!(close(zeta_det_exact(lambda, length, degree).unwrap(), expected, 1e-10), "{lambda}");
            }
        }
    }
}

#[test]
fn gelfand_yaglom_matches_zeta() {
    for lambda in sample_holonomies() {
        let m = CircleModel::new(2.0 * PI, lambda).unwrap();
        let z = zeta_det_exact(lambda, 2.0 * PI, 0).unwrap();
        for degree in 0..2 {
            assert!(close(gelfand_yaglom_det(&m, degree).unwrap(), z, 1e-8), "{lambda} degree {degree}");
        }
    }
}

#[test]
fn discrete_low_spectrum_converges() {
    let lambda = c(2.0, 0.5);
    let length = 2.0 * PI;
    let exact = exact_spectrum_circle(lambda, length).unwrap();
    let m = CircleModel::new(length, lambda).unwrap();
    let mut previous = f64::INFINITY;
    for n in [64, 128, 256] {
        let ev = eigenvalues(&build_discrete(&m, n).unwrap().lap0).unwrap();
        let err = (-2..=2)
            .map(|k| {
                let mu = exact.eigenvalue(k);
                ev.iter().map(|z| (z - mu).norm()).fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        // second order: halving h divides the error by about four
        assert!(err < previous / 3.0, "N = {n}: {err}");
        previous = err;
    }
    assert!(previous < 1e-3);
}

#[test]
fn degree_one_is_isospectral_to_degree_zero() {
    let m = CircleModel::new(2.0 * PI, c(-1.5, 0.8))
        .unwrap()
        .with_perturbation(Perturbation::Sin { amp: 0.4, freq: 2 })
        .unwrap();
    let ops = build_discrete(&m, 96).unwrap();
    let ev0 = eigenvalues(&ops.lap0).unwrap();
    let ev1 = eigenvalues(&ops.lap1).unwrap();
    let scale = ev0.iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(spectral_mismatch(&ev0, &ev1).unwrap() < 1e-9 * scale);
}

#[test]
fn torsion_does_not_depend_on_the_cut() {
    for lambda in sample_holonomies() {
        let m = CircleModel::new(2.0 * PI, lambda).unwrap();
        let t0 = rs_torsion(&m, 0.0, RsMethod::Exact).unwrap();
        for a in [0.3, 2.0, 9.0] {
            assert!(close(rs_torsion(&m, a, RsMethod::Exact).unwrap(), t0, 1e-9), "{lambda} cut {a}");
        }
        assert!(close(t0, lambda / (lambda - 1.0).powi(2), 1e-10));
    }
}

#[test]
fn perturbed_torsion_agrees_across_methods() {
    let m = CircleModel::new(2.0 * PI, c(2.0, 0.0))
        .unwrap()
        .with_perturbation(Perturbation::Sin { amp: 0.25, freq: 1 })
        .unwrap();
    let gy = rs_torsion(&m, 0.0, RsMethod::GelfandYaglom).unwrap();
    let discrete = rs_torsion(&m, 0.0, RsMethod::Discrete { coarse: 64 }).unwrap();
    assert!(close(discrete, gy, 1e-5), "{discrete} vs {gy}");
}

#[test]
fn grid_difference_is_a_chain_map() {
    let m = CircleModel::new(3.0, c(0.5, 2.0)).unwrap().with_potential(2).unwrap();
    assert!(chain_defect(&m, 64, &build_discrete(&m, 64).unwrap().d).unwrap() < 1e-14);
}

#[test]
fn witten_small_eigenvalues_count_critical_points() {
    for wells in [1, 2] {
        let m = CircleModel::new(2.0 * PI, c(2.0, 0.0)).unwrap().with_potential(wells).unwrap();
        let s = small_spectrum_dims(&m, 6.0, 128, 1.0).unwrap();
        assert_eq!(s.counts, [wells as usize; 2]);
        assert!(s.small_max < 1e-3 && s.large_min > 2.0);
    }
}

#[test]
fn undeformed_spectrum_has_no_gap() {
    let m = CircleModel::new(2.0 * PI, c(2.0, 0.0)).unwrap().with_potential(1).unwrap();
    assert!(matches!(small_spectrum_dims(&m, 0.0, 128, 1.0), Err(Error::Resolution(_))));
}

#[test]
fn conjugation_preserves_spectrum() {
    let m = CircleModel::new(2.0 * PI, c(2.0, 0.0)).unwrap().with_potential(1).unwrap();
    assert!(conjugation_isospectral_check(&m, 3.0, 64).unwrap() < 1e-10);
    assert!(matches!(
        conjugation_isospectral_check_with(&m, 3.0, 64, Stencil::Linearized),
        Err(Error::StencilMismatch { .. })
    ));
}
