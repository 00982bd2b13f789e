use bilinear_torsion::complex_torsion::cohomology;
use bilinear_torsion::random::{random_symmetric_form, rng_from_seed};
use bilinear_torsion::thom_smale::{
    build_thom_smale, make_circle_morse, make_circle_morse_matrix, milnor_anomaly_check, milnor_torsion, CriticalForms,
    MorseSystem,
};
use bilinear_torsion::turaev::{
    euler_class_circle, fox_alexander, knot_corpus, turaev_torsion, EulerStructure, KnotPresentation, Laurent,
    Representation,
};
use bilinear_torsion::{c, CMatrix, C64};

fn turaev(ms: &MorseSystem, lambda: C64, windings: &[i32]) -> (C64, i64) {
    let rep = Representation::circle(CMatrix::diag(&[lambda])).unwrap();
    let e = EulerStructure::circle("c0", windings);
    let (complex, _) = build_thom_smale(ms, &CriticalForms::standard(ms)).unwrap();
    let t = turaev_torsion(ms, &rep, &e, &CMatrix::identity(1), &cohomology(&complex)).unwrap();
    (t, euler_class_circle(ms, &e).unwrap())
}

#[test]
fn one_pair_circle() {
    let lambda = c(2.0, 1.0);
    let ms = make_circle_morse(1, lambda, 1).unwrap();
    let (t, class) = turaev(&ms, lambda, &[0, 0]);
    assert_eq!(class, 0);
    let expected = (lambda - 1.0).powi(-2);
    assert!((t - expected).norm() < 1e-13 * expected.norm(), "{t} vs {expected}");
}

#[test]
fn class_shift_divides_by_holonomy_squared() {
    let lambda = c(0.7, -1.3);
    let ms = make_circle_morse(2, lambda, 3).unwrap();
    let (t0, k0) = turaev(&ms, lambda, &[0, 0, 0, 0]);
    let (t1, k1) = turaev(&ms, lambda, &[1, 0, 0, 0]);
    assert_eq!(k1 - k0, 1);
    assert!((t1 / t0 - lambda.powi(-2)).norm() < 1e-12);
}

#[test]
fn independent_of_subdivision_and_seam() {
    let lambda = C64::from_polar(1.5, 0.4);
    let reference = turaev(&make_circle_morse(1, lambda, 1).unwrap(), lambda, &[0, 0]).0;
    for pairs in 1..=4 {
        for seam in 0..2 * pairs {
            let ms = make_circle_morse(pairs, lambda, seam).unwrap();
            let mut w = vec![0; 2 * pairs];
            let class = euler_class_circle(&ms, &EulerStructure::circle("c0", &w)).unwrap();
            // Bring every spider to class 0 by moving the base minimum.
            w[0] -= class as i32;
            let (t, k) = turaev(&ms, lambda, &w);
            assert_eq!(k, 0);
            assert!((t - reference).norm() < 1e-11 * reference.norm(), "pairs {pairs} seam {seam}: {t}");
        }
    }
}

#[test]
fn milnor_anomaly_rank_two() {
    let mut rng = rng_from_seed(77);
    let hol = CMatrix::diag(&[c(2.0, 0.0), c(0.5, 1.0)]);
    let ms = make_circle_morse_matrix(3, &hol, 2).unwrap();
    let forms = |rng: &mut _| {
        CriticalForms::new((0..ms.points().len()).map(|_| random_symmetric_form(rng, 2)).collect()).unwrap()
    };
    let (b0, b1) = (forms(&mut rng), forms(&mut rng));
    let h = cohomology(&build_thom_smale(&ms, &b0).unwrap().0);
    let ratio = milnor_torsion(&ms, &b1, &h).unwrap() / milnor_torsion(&ms, &b0, &h).unwrap();
    let predicted = milnor_anomaly_check(&ms, &b0, &b1).unwrap();
    assert!((ratio - predicted).norm() < 1e-9 * predicted.norm());
}

/// Reduced Burau matrices evaluated at `t`: `σ_k` acts on the `(n−1)`-dimensional
/// representation with the standard tridiagonal block.
fn burau(strands: usize, braid: &[i32], t: f64) -> f64 {
    let m = strands - 1;
    let sigma = |k: usize| {
        let mut s = vec![vec![0.0; m]; m];
        for (i, row) in s.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        s[k][k] = -t;
        if k > 0 {
            s[k][k - 1] = t;
        }
        if k + 1 < m {
            s[k][k + 1] = 1.0;
        }
        s
    };
    let mul = |a: &Vec<Vec<f64>>, b: &Vec<Vec<f64>>| {
        (0..m).map(|i| (0..m).map(|j| (0..m).map(|l| a[i][l] * b[l][j]).sum()).collect()).collect::<Vec<Vec<f64>>>()
    };
    let inv = |a: &Vec<Vec<f64>>| {
        let mut aug: Vec<Vec<f64>> = a
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().cloned().chain((0..m).map(|j| f64::from(i == j))).collect())
            .collect();
        for col in 0..m {
            let p = (col..m).max_by(|&x, &y| aug[x][col].abs().total_cmp(&aug[y][col].abs())).unwrap();
            aug.swap(col, p);
            let d = aug[col][col];
            aug[col].iter_mut().for_each(|x| *x /= d);
            for r in 0..m {
                if r != col {
                    let f = aug[r][col];
                    let pivot = aug[col].clone();
                    aug[r].iter_mut().zip(&pivot).for_each(|(x, y)| *x -= f * y);
                }
            }
        }
        aug.into_iter().map(|r| r[m..].to_vec()).collect::<Vec<_>>()
    };
    let mut b: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| f64::from(i == j)).collect()).collect();
    for &s in braid {
        let g = sigma(s.unsigned_abs() as usize - 1);
        b = mul(&b, &if s > 0 { g } else { inv(&g) });
    }
    // det(I - B) by Gaussian elimination.
    let mut a: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| f64::from(i == j) - b[i][j]).collect()).collect();
    let mut det = 1.0;
    for col in 0..m {
        let p = (col..m).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).unwrap();
        if p != col {
            a.swap(col, p);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..m {
            let f = a[r][col] / a[col][col];
            let pivot = a[col].clone();
            a[r].iter_mut().zip(&pivot).for_each(|(x, y)| *x -= f * y);
        }
    }
    let norm: f64 = (0..strands).map(|k| t.powi(k as i32)).sum();
    det / norm
}

/// Checks `fox(t) = ±t^m · burau(t)` at two sample points with the same `m`.
fn agree_up_to_unit(fox: &Laurent, strands: usize, braid: &[i32]) -> bool {
    let unit = |t: f64| fox.eval(t) / burau(strands, braid, t);
    let (u2, u3) = (unit(2.0), unit(3.0));
    let m = u2.abs().log2().round() as i32;
    (u2.abs() - 2f64.powi(m)).abs() < 1e-8 * 2f64.powi(m)
        && (u3 - u2.signum() * 3f64.powi(m)).abs() < 1e-8 * 3f64.powi(m)
}

#[test]
fn corpus_matches_burau() {
    let braids: [(&str, usize, &[i32]); 6] = [
        ("3_1", 2, &[1, 1, 1]),
        ("4_1", 3, &[1, -2, 1, -2]),
        ("5_1", 2, &[1, 1, 1, 1, 1]),
        ("5_2", 3, &[1, 1, 1, 2, -1, 2]),
        ("6_2", 3, &[1, 1, 1, -2, 1, -2]),
        ("8_19", 3, &[1, 2, 1, 2, 1, 2, 1, 2]),
    ];
    for (name, strands, braid) in braids {
        let fox = fox_alexander(&KnotPresentation::from_braid(strands, braid).unwrap()).unwrap();
        assert!(agree_up_to_unit(&fox, strands, braid), "{name}: {fox}");
    }
}

#[test]
fn corpus_polynomials_are_symmetric() {
    for (name, presentation, expected) in knot_corpus() {
        let d = fox_alexander(&presentation).unwrap();
        assert_eq!(d.normalized(), expected.normalized(), "{name}");
        assert!(d.is_palindromic(), "{name}");
        assert_eq!(d.at_one().abs(), 1, "{name}");
    }
}

#[test]
fn wirtinger_style_trefoil() {
    let p = KnotPresentation::new(vec!["x".into(), "y".into()], vec!["x y x Y X Y".into()]).unwrap();
    assert_eq!(fox_alexander(&p).unwrap().to_string(), "t^2 - t + 1");
}
