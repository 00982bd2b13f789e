//! The numerical verification suite.
//!
//! Twelve criteria, each a seeded, deterministic experiment with a fixed
//! tolerance and time budget. [`run_all`] is shared by the `btorsion verify`
//! command and the `acceptance` test target.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::Rng;

use crate::circle::{
    absolute_comparison, bz_calibration, bz_compare, conjugation_isospectral_check, conjugation_isospectral_check_with,
    linear_fit, rs_torsion, small_spectrum_dims, CircleModel, Perturbation, Reference, RsMethod, Stencil,
};
use crate::complex_torsion::{cohomology, torsion_form, CohomologyData};
use crate::error::Result;
use crate::numkernel::{CMatrix, C64};
use crate::random::{
    random_bilinear, random_complex_with_cohomology, random_invertible, random_symmetric_form, rng_from_seed,
    TorsionRng,
};
use crate::thom_smale::{
    build_thom_smale, make_circle_morse, make_circle_morse_matrix, milnor_anomaly_check, milnor_torsion, CriticalForms,
};
use crate::turaev::{
    euler_class_circle, fox_alexander, knot_corpus, turaev_torsion, EulerStructure, KnotPresentation, Laurent,
    Representation,
};

/// Seed and tolerance scaling for a verification run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Multiplies every numerical tolerance.
    pub tol_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 20240601, tol_scale: 1.0 }
    }
}

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2}  {}  {:>7.2}s / {:>3}s  {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.title,
            self.detail
        )
    }
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { passed, detail: detail.into() })
}

type Check = fn(&VerifyOptions) -> Result<Outcome>;

const CRITERIA: [(&str, u64, Check); 12] = [
    ("finite-complex anomaly", 5, finite_anomaly),
    ("exterior-power oracle", 5, wedge_oracle),
    ("Milnor anomaly", 5, milnor_anomaly),
    ("Turaev choice independence", 5, turaev_independence),
    ("Alexander polynomials", 2, alexander),
    ("Ray-Singer vs Milnor", 10, main_comparison),
    ("cut independence", 5, cut_independence),
    ("anomaly invariance in odd dimension", 60, odd_anomaly),
    ("Witten clustering", 120, witten_clustering),
    ("conjugation isospectrality", 60, isospectral),
    ("transported small-band torsion", 180, small_band_transport),
    ("absolute value of the comparison", 5, absolute_value),
];

pub fn criterion_count() -> usize {
    CRITERIA.len()
}

/// Run criterion `id` (1-based).
pub fn run_criterion(id: usize, opts: &VerifyOptions) -> CriterionReport {
    let (title, budget, check) = CRITERIA[id - 1];
    let budget = Duration::from_secs(budget);
    let start = Instant::now();
    let result = check(opts);
    let elapsed = start.elapsed();
    let (passed, detail) = match result {
        Ok(o) if elapsed > budget => (false, format!("{} (over the time budget)", o.detail)),
        Ok(o) => (o.passed, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionReport { id, title, passed, detail, elapsed, budget }
}

pub fn run_all(opts: &VerifyOptions) -> Vec<CriterionReport> {
    (1..=CRITERIA.len()).map(|id| run_criterion(id, opts)).collect()
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Random `(betti, ranks)` with total dimension at most `max_dim`.
fn random_profile(rng: &mut TorsionRng, max_dim: usize) -> (Vec<usize>, Vec<usize>) {
    loop {
        let n = rng.gen_range(1..=4);
        let betti: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
        let ranks: Vec<usize> = (0..n - 1).map(|_| rng.gen_range(0..=3)).collect();
        let total: usize = betti.iter().sum::<usize>() + 2 * ranks.iter().sum::<usize>();
        if (1..=max_dim).contains(&total) {
            return (betti, ranks);
        }
    }
}

fn finite_anomaly(opts: &VerifyOptions) -> Result<Outcome> {
    let tol = 1e-9 * opts.tol_scale;
    let mut rng = rng_from_seed(opts.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (betti, ranks) = random_profile(&mut rng, 12);
        let (c, h) = random_complex_with_cohomology(&mut rng, &betti, &ranks)?;
        let b = random_bilinear(&mut rng, &c)?;
        let autos: Vec<CMatrix> = c.dims().iter().map(|&n| random_invertible(&mut rng, n)).collect();
        let before = torsion_form(&c, &b, &h)?;
        let after = torsion_form(&c, &b.pulled_back(&autos)?, &h)?;
        let predicted = crate::complex_torsion::anomaly_ratio(&c, &b, &autos)?;
        worst = worst.max(rel(after / before, predicted));
    }
    outcome(worst <= tol, format!("100 complexes, max relative error {worst:.2e} (tolerance {tol:.0e})"))
}

/// Exterior-algebra evaluation of the torsion, independent of the
/// elimination-based implementation.
pub mod wedge {
    use std::collections::BTreeMap;

    use crate::complex_torsion::{BilinearStructure, CohomologyData, GradedComplex};
    use crate::numkernel::{CMatrix, C64};

    /// A `k`-vector as coefficients on sorted index sets.
    #[derive(Debug, Clone)]
    pub struct KVector {
        terms: BTreeMap<Vec<usize>, C64>,
        /// Product of the norms of the factors, for relative zero tests.
        scale: f64,
    }

    impl KVector {
        pub fn one() -> Self {
            KVector { terms: BTreeMap::from([(vec![], C64::new(1.0, 0.0))]), scale: 1.0 }
        }

        /// `self ∧ v`.
        pub fn wedge(&self, v: &[C64]) -> Self {
            let mut terms: BTreeMap<Vec<usize>, C64> = BTreeMap::new();
            for (set, &coef) in &self.terms {
                for (j, &vj) in v.iter().enumerate() {
                    if vj == C64::new(0.0, 0.0) || set.contains(&j) {
                        continue;
                    }
                    // Moving e_j from the end into place passes every larger index.
                    let passes = set.iter().filter(|&&k| k > j).count();
                    let sign = if passes % 2 == 0 { 1.0 } else { -1.0 };
                    let mut s = set.clone();
                    let pos = s.partition_point(|&k| k < j);
                    s.insert(pos, j);
                    *terms.entry(s).or_insert(C64::new(0.0, 0.0)) += coef * vj * sign;
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            KVector { terms, scale: self.scale * norm }
        }

        pub fn is_zero(&self) -> bool {
            self.terms.values().all(|c| c.norm() <= 1e-9 * self.scale)
        }

        /// Coefficient on `e_0 ∧ … ∧ e_{n−1}`.
        pub fn top(&self, n: usize) -> C64 {
            let full: Vec<usize> = (0..n).collect();
            self.terms.get(&full).copied().unwrap_or(C64::new(0.0, 0.0))
        }
    }

    /// Determinant by the Leibniz expansion.
    pub fn leibniz_det(m: &CMatrix) -> C64 {
        let n = m.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = C64::new(0.0, 0.0);
        permute(&mut perm, 0, 1.0, &mut |p, s| {
            let mut term = C64::new(s, 0.0);
            for (i, &j) in p.iter().enumerate() {
                term *= m[(i, j)];
            }
            total += term;
        });
        total
    }

    fn permute(p: &mut Vec<usize>, k: usize, sign: f64, f: &mut dyn FnMut(&[usize], f64)) {
        if k == p.len() {
            f(p, sign);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, if i == k { sign } else { -sign }, f);
            p.swap(k, i);
        }
    }

    /// `∏ᵢ b_{det Cⁱ}(ωᵢ, ωᵢ)^{(−1)ⁱ}` with `ωᵢ = ∂ãᵢ₋₁ ∧ h̃ᵢ ∧ ãᵢ`, where
    /// the complements `ãᵢ` are standard vectors chosen greedily from the
    /// last index down.
    pub fn torsion(c: &GradedComplex, b: &BilinearStructure, h: &CohomologyData) -> C64 {
        let n = c.degrees();
        let mut incoming: Vec<Vec<C64>> = Vec::new();
        let mut result = C64::new(1.0, 0.0);
        for i in 0..n {
            let dim = c.dims()[i];
            let mut omega = KVector::one();
            for v in &incoming {
                omega = omega.wedge(v);
            }
            for k in 0..h.bases()[i].cols() {
                omega = omega.wedge(&h.bases()[i].col(k));
            }
            let mut outgoing = Vec::new();
            if i + 1 < n {
                let d = c.differential(i);
                let mut image = KVector::one();
                for j in (0..dim).rev() {
                    let col = d.col(j);
                    let trial = image.wedge(&col);
                    if !trial.is_zero() {
                        image = trial;
                        outgoing.push(col);
                        let mut e = vec![C64::new(0.0, 0.0); dim];
                        e[j] = C64::new(1.0, 0.0);
                        omega = omega.wedge(&e);
                    }
                }
            }
            let coef = omega.top(dim);
            let value = coef * coef * leibniz_det(b.gram(i));
            if i % 2 == 0 {
                result *= value;
            } else {
                result /= value;
            }
            incoming = outgoing;
        }
        result
    }
}

fn wedge_oracle(opts: &VerifyOptions) -> Result<Outcome> {
    let tol = 1e-10 * opts.tol_scale;
    let mut rng = rng_from_seed(opts.seed ^ 0x2);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (betti, ranks) in profiles(6) {
        let (c, h) = random_complex_with_cohomology(&mut rng, &betti, &ranks)?;
        let b = random_bilinear(&mut rng, &c)?;
        worst = worst.max(rel(torsion_form(&c, &b, &h)?, wedge::torsion(&c, &b, &h)));
        count += 1;
    }
    outcome(worst <= tol, format!("{count} shapes, max relative error {worst:.2e} (tolerance {tol:.0e})"))
}

/// Every `(betti, ranks)` with total dimension in `1..=max_dim` and at most
/// four degrees.
pub fn profiles(max_dim: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    const MAX_DEGREES: usize = 4;
    fn extend(acc: &mut Vec<(Vec<usize>, Vec<usize>)>, betti: Vec<usize>, ranks: Vec<usize>, left: usize) {
        if !betti.is_empty() {
            acc.push((betti.clone(), ranks.clone()));
        }
        if betti.len() == MAX_DEGREES {
            return;
        }
        for b in 0..=left {
            let rest = left - b;
            if betti.is_empty() {
                extend(acc, vec![b], vec![], rest);
            } else {
                for r in 0..=rest / 2 {
                    let mut nb = betti.clone();
                    nb.push(b);
                    let mut nr = ranks.clone();
                    nr.push(r);
                    extend(acc, nb, nr, rest - 2 * r);
                }
            }
        }
    }
    let mut acc = Vec::new();
    extend(&mut acc, vec![], vec![], max_dim);
    acc.retain(|(b, r)| {
        let total = b.iter().sum::<usize>() + 2 * r.iter().sum::<usize>();
        total >= 1
    });
    acc.sort();
    acc.dedup();
    acc
}

fn milnor_anomaly(opts: &VerifyOptions) -> Result<Outcome> {
    let tol = 1e-9 * opts.tol_scale;
    let mut rng = rng_from_seed(opts.seed ^ 0x3);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let pairs = rng.gen_range(1..=4);
        let rank = rng.gen_range(1..=3);
        let seam = rng.gen_range(0..2 * pairs);
        let ms = make_circle_morse_matrix(pairs, &random_invertible(&mut rng, rank), seam)?;
        let draw = |rng: &mut TorsionRng| {
            CriticalForms::new(ms.points().iter().map(|_| random_symmetric_form(rng, rank)).collect())
        };
        let forms = draw(&mut rng)?;
        let forms1 = draw(&mut rng)?;
        let (c, _) = build_thom_smale(&ms, &forms)?;
        let h = cohomology(&c);
        let ratio = milnor_torsion(&ms, &forms1, &h)? / milnor_torsion(&ms, &forms, &h)?;
        worst = worst.max(rel(ratio, milnor_anomaly_check(&ms, &forms, &forms1)?));
    }
    outcome(worst <= tol, format!("50 systems, max relative error {worst:.2e} (tolerance {tol:.0e})"))
}

fn empty_cohomology(counts: &[usize], rank: usize) -> CohomologyData {
    CohomologyData::new(counts.iter().map(|&d| CMatrix::zeros(d * rank, 0)).collect())
}

fn turaev_independence(opts: &VerifyOptions) -> Result<Outcome> {
    let tol = 1e-12 * opts.tol_scale;
    let mut rng = rng_from_seed(opts.seed ^ 0x4);
    let mut worst: f64 = 0.0;
    let mut classes_ok = true;
    for lambda in [C64::new(2.0, 0.0), C64::from_polar(1.0, PI / 5.0), C64::new(0.3, -1.2)] {
        let rep = Representation::circle(CMatrix::diag(&[lambda]))?;
        let ms = make_circle_morse(2, lambda, 3)?;
        let h = empty_cohomology(&ms.index_counts(), 1);
        let base = EulerStructure::circle("c0", &[0, 0, 0, 0]);
        let class = euler_class_circle(&ms, &base)?;
        let reference = turaev_torsion(&ms, &rep, &base, &CMatrix::identity(1), &h)?;
        for _ in 0..10 {
            // Global shift, compensating shifts on a minimum-maximum pair,
            // another base point and another base form.
            let shift = rng.gen_range(-3..=3);
            let pair = rng.gen_range(0..2);
            let extra = rng.gen_range(-2..=2);
            let mut w = vec![shift; 4];
            w[2 * pair] += extra;
            w[2 * pair + 1] += extra;
            let label = format!("c{}", rng.gen_range(0..4));
            let e = EulerStructure::circle(&label, &w);
            classes_ok &= euler_class_circle(&ms, &e)? == class;
            let b0 = random_symmetric_form(&mut rng, 1);
            worst = worst.max(rel(turaev_torsion(&ms, &rep, &e, &b0, &h)?, reference));
        }
        // One pair of critical points against two, and across seam parity.
        let one = make_circle_morse(1, lambda, 1)?;
        let e1 = EulerStructure::circle("c0", &[0, 0]);
        let even_seam = make_circle_morse(2, lambda, 2)?;
        let e2 = EulerStructure::circle("c0", &[1, 0, 0, 0]);
        classes_ok &= euler_class_circle(&one, &e1)? == class && euler_class_circle(&even_seam, &e2)? == class;
        let t1 = turaev_torsion(&one, &rep, &e1, &CMatrix::identity(1), &empty_cohomology(&one.index_counts(), 1))?;
        let t2 = turaev_torsion(&even_seam, &rep, &e2, &CMatrix::identity(1), &h)?;
        worst = worst.max(rel(t1, reference)).max(rel(t2, reference));
    }
    outcome(
        worst <= tol && classes_ok,
        format!("3 holonomies x 10 re-choices and cross-system checks, max relative spread {worst:.2e} (tolerance {tol:.0e})"),
    )
}

fn alexander(_: &VerifyOptions) -> Result<Outcome> {
    let hand: [(&str, &[&str], &[&str], &[i128]); 3] = [
        ("unknot", &["x"], &[], &[1]),
        ("trefoil", &["x", "y"], &["x y x Y X Y"], &[1, -1, 1]),
        ("figure-eight", &["x", "y"], &["y x Y x y X Y x Y X"], &[1, -3, 1]),
    ];
    let mut failures = Vec::new();
    for (name, gens, rels, coeffs) in hand {
        let p = KnotPresentation::new(
            gens.iter().map(|s| s.to_string()).collect(),
            rels.iter().map(|s| s.to_string()).collect(),
        )?;
        if fox_alexander(&p)? != Laurent::from_coeffs(0, coeffs.to_vec()) {
            failures.push(name.to_string());
        }
    }
    let corpus = knot_corpus();
    for (name, p, expected) in &corpus {
        let d = fox_alexander(p)?;
        if &d != expected || d.at_one().abs() != 1 || !d.is_palindromic() {
            failures.push(name.to_string());
        }
    }
    let detail = if failures.is_empty() {
        format!("3 hand-computed polynomials and a {}-knot corpus", corpus.len())
    } else {
        format!("mismatch for {}", failures.join(", "))
    };
    outcome(failures.is_empty(), detail)
}

/// Seeded holonomies with `|1 − λ| > 0.1`, alternating unitary and not.
fn seeded_holonomies(rng: &mut TorsionRng, count: usize) -> Vec<C64> {
    let mut out = Vec::new();
    while out.len() < count {
        let angle = rng.gen_range(-PI..PI);
        let radius = if out.len() % 2 == 0 { 1.0 } else { rng.gen_range(0.2..4.0) };
        let lam = C64::from_polar(radius, angle);
        if (C64::new(1.0, 0.0) - lam).norm() > 0.1 && angle.abs() < PI - 1e-3 {
            out.push(lam);
        }
    }
    out
}

fn main_comparison(opts: &VerifyOptions) -> Result<Outcome> {
    let tol = 1e-8 * opts.tol_scale;
    let calibration = bz_calibration()?;
    let mut rng = rng_from_seed(opts.seed ^ 0x6);
    let mut worst: f64 = 0.0;
    for lam in seeded_holonomies(&mut rng, 20) {
        let r = bz_compare(&CircleModel::new(2.0 * PI, lam)?)?;
        worst = worst.max((r - C64::new(1.0, 0.0)).norm());
    }
    outcome(
        worst <= tol,
        format!("calibration {:.12}, 20 holonomies, max |ratio - 1| {worst:.2e} (tolerance {tol:.0e})", calibration.re),
    )
}

fn cut_independence(opts: &VerifyOptions) -> Result<Outcome> {
    let tol = 1e-10 * opts.tol_scale;
    let mut worst: f64 = 0.0;
    for lam in [C64::new(2.0, 0.0), C64::from_polar(1.0, PI / 5.0), C64::new(-0.5, 0.7), C64::new(1.0, 0.0)] {
        let m = CircleModel::new(2.0 * PI, lam)?;
        let values = [0.5, 2.0, 5.0].map(|a| rs_torsion(&m, a, RsMethod::Exact));
        let first = values[0].clone()?;
        for v in &values[1..] {
            worst = worst.max(rel(v.clone()?, first));
        }
    }
    outcome(
        worst <= tol,
        format!("4 holonomies, cuts 0.5, 2, 5, max relative spread {worst:.2e} (tolerance {tol:.0e})"),
    )
}

fn odd_anomaly(opts: &VerifyOptions) -> Result<Outcome> {
    let lam = C64::new(2.0, 0.0);
    let flat = CircleModel::new(2.0 * PI, lam)?;
    let bumped = flat.clone().with_perturbation(Perturbation::Sin { amp: 0.3, freq: 1 })?;
    let reference = rs_torsion(&flat, 0.0, RsMethod::Exact)?;
    let gy = rel(rs_torsion(&bumped, 0.0, RsMethod::GelfandYaglom)?, reference);
    let disc = rel(rs_torsion(&bumped, 0.0, RsMethod::Discrete { coarse: 128 })?, reference);
    let (tg, td) = (1e-6 * opts.tol_scale, 1e-3 * opts.tol_scale);
    outcome(
        gy <= tg && disc <= td,
        format!("monodromy {gy:.2e} (tolerance {tg:.0e}), discrete N=128..512 {disc:.2e} (tolerance {td:.0e})"),
    )
}

fn witten_clustering(_: &VerifyOptions) -> Result<Outcome> {
    let lam = C64::new(2.0, 0.0);
    let one_well = CircleModel::new(2.0 * PI, lam)?.with_potential(1)?;
    let two_wells = CircleModel::new(2.0 * PI, lam)?.with_potential(2)?;
    let s5 = small_spectrum_dims(&one_well, 5.0, 512, 1.0)?;
    let s10 = small_spectrum_dims(&one_well, 10.0, 512, 1.0)?;
    let s20 = small_spectrum_dims(&one_well, 20.0, 512, 1.0)?;
    let s12 = small_spectrum_dims(&two_wells, 12.0, 512, 1.0)?;
    let trace = |s: &crate::circle::SmallSpectrum| s.trace[0].norm() + s.trace[1].norm();
    let (slope, r2) = linear_fit(&[5.0, 10.0, 20.0], &[s5.large_min, s10.large_min, s20.large_min]);
    let passed = s10.counts == [1, 1]
        && s12.counts == [2, 2]
        && trace(&s10) < trace(&s5)
        && s20.small_max < s5.small_max
        && slope > 0.0
        && r2 > 0.9;
    outcome(
        passed,
        format!(
            "counts {:?} at T=10, {:?} with two wells at T=12; |trace| {:.1e} -> {:.1e}; large-band slope {slope:.3}, R^2 {r2:.4}",
            s10.counts,
            s12.counts,
            trace(&s5),
            trace(&s10)
        ),
    )
}

fn isospectral(opts: &VerifyOptions) -> Result<Outcome> {
    let m = CircleModel::new(2.0 * PI, C64::new(2.0, 0.0))?.with_potential(1)?;
    let mut worst: f64 = 0.0;
    for t in [5.0, 10.0] {
        for n in [128, 256] {
            worst = worst.max(conjugation_isospectral_check(&m, t, n)?);
        }
    }
    let control_rejected = conjugation_isospectral_check_with(&m, 5.0, 128, Stencil::Linearized).is_err();
    let tol = 1e-10 * opts.tol_scale;
    outcome(
        worst <= tol && control_rejected,
        format!(
            "max mismatch {worst:.2e} x radius (tolerance {tol:.0e}); mismatched stencil rejected: {control_rejected}"
        ),
    )
}

fn small_band_transport(_: &VerifyOptions) -> Result<Outcome> {
    let flat = |hol: Vec<C64>| -> Result<CircleModel> {
        CircleModel::with_holonomies(2.0 * PI, hol)?
            .with_potential(1)?
            .with_reference(Reference::Flattened { window: 0.1 })
    };
    let cases = [
        ("2", flat(vec![C64::new(2.0, 0.0)])?),
        ("e^(i pi/5)", flat(vec![C64::from_polar(1.0, PI / 5.0)])?),
        ("diag(2,3)", flat(vec![C64::new(2.0, 0.0), C64::new(3.0, 0.0)])?),
    ];
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, m) in &cases {
        let rows = crate::circle::small_band_transport(m, &[4.0, 10.0], 256)?;
        passed &= rows[1].log_abs < rows[0].log_abs;
        parts.push(format!("{name}: |log| {:.4} -> {:.4}", rows[0].log_abs, rows[1].log_abs));
    }
    outcome(passed, parts.join("; "))
}

fn absolute_value(opts: &VerifyOptions) -> Result<Outcome> {
    let tol = 1e-8 * opts.tol_scale;
    let mut worst: f64 = 0.0;
    for lam in [C64::from_polar(1.0, PI / 5.0), C64::from_polar(1.0, 2.0), C64::new(2.0, 0.0), C64::new(0.4, 1.3)] {
        let p = absolute_comparison(&CircleModel::new(2.0 * PI, lam)?)?;
        worst = worst.max((p.abs_ratio - 1.0).abs()).max((p.against_hermitian - 1.0).abs());
    }
    outcome(worst <= tol, format!("4 holonomies, max ||ratio| - 1| {worst:.2e} (tolerance {tol:.0e})"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_enumeration_is_complete_for_small_sizes() {
        let p = profiles(2);
        assert!(p.contains(&(vec![0, 0], vec![1])));
        assert!(p.contains(&(vec![2], vec![])));
        assert!(p.contains(&(vec![1, 0, 1], vec![0, 0])));
        assert!(p.iter().all(|(b, r)| b.iter().sum::<usize>() + 2 * r.iter().sum::<usize>() <= 2));
    }

    #[test]
    fn leibniz_matches_lu() {
        let mut rng = rng_from_seed(5);
        let m = crate::random::random_matrix(&mut rng, 5, 5);
        let a = wedge::leibniz_det(&m);
        let b = crate::numkernel::lu_det(&m).unwrap();
        assert!((a - b).norm() < 1e-12 * b.norm());
    }

    #[test]
    fn fast_criteria_pass() {
        let opts = VerifyOptions::default();
        for id in [1, 2, 3, 4, 5, 6, 7, 12] {
            let r = run_criterion(id, &opts);
            assert!(r.passed, "{}", r.line());
        }
    }
}
