//! Closed-form spectrum of the Laplacian for the canonical form, and its
//! zeta-regularized determinant.
//!
//! For the canonical log-density `φ₀ = −ℓθ/L` (`ℓ = log λ`, principal
//! branch) the sections `u_n = e^{ℓθ/L} e^{2πinθ/L}` diagonalize `d`, with
//! `d u_n = ((2πin + ℓ)/L) u_n`, and both Laplacians have eigenvalues
//!
//! `μ_n = ((2πn)² + ℓ²)/L² = (2π/L)² (n − z)(n + z)`, `z = ℓ/(2πi)`.
//!
//! The regularized product of `(n − w₁)(n − w₂)` over `n ∈ Z` is computed by
//! splitting off a finite product and continuing the tail through Hurwitz
//! zeta values. The family has `ζ(0) = 0`, so the factor `(2π/L)²` drops
//! out and the result does not depend on `L`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numkernel::C64;

/// `μ_n = ((2πn)² + ℓ²)/L²` for `n ∈ Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactSpectrum {
    pub length: f64,
    pub lambda: C64,
    /// Principal logarithm of `λ`.
    pub ell: C64,
}

impl ExactSpectrum {
    pub fn eigenvalue(&self, n: i64) -> C64 {
        let k = 2.0 * PI * n as f64;
        (C64::new(k * k, 0.0) + self.ell * self.ell) / (self.length * self.length)
    }

    /// `z = ℓ/(2πi)`, so that `μ_n = (2π/L)²(n² − z²)`.
    pub fn z(&self) -> C64 {
        self.ell / C64::new(0.0, 2.0 * PI)
    }

    /// Mode numbers with `|μ_n| ≤ radius`, ascending.
    pub fn modes_within(&self, radius: f64) -> Vec<i64> {
        // |μ_n| ≥ ((2πn)² − |ℓ|²)/L², so modes beyond this bound are outside.
        let bound = ((radius * self.length * self.length + self.ell.norm_sqr()).sqrt() / (2.0 * PI)).ceil() as i64 + 1;
        (-bound..=bound).filter(|&n| self.eigenvalue(n).norm() <= radius).collect()
    }

    pub fn count_within(&self, radius: f64) -> usize {
        self.modes_within(radius).len()
    }

    /// Distance from the circle `|z| = radius` to the nearest eigenvalue.
    pub fn clearance(&self, radius: f64) -> f64 {
        let bound = ((radius * self.length * self.length + self.ell.norm_sqr()).sqrt() / (2.0 * PI)).ceil() as i64 + 2;
        (-bound..=bound).map(|n| (self.eigenvalue(n).norm() - radius).abs()).fold(f64::INFINITY, f64::min)
    }

    pub fn has_zero_mode(&self) -> bool {
        self.ell.norm() == 0.0
    }
}

pub fn exact_spectrum_circle(lambda: C64, length: f64) -> Result<ExactSpectrum> {
    if lambda.norm() == 0.0 {
        return Err(Error::Model("holonomy must be nonzero".into()));
    }
    if !(length > 0.0) {
        return Err(Error::Model("circumference must be positive".into()));
    }
    Ok(ExactSpectrum { length, lambda, ell: lambda.ln() })
}

/// Hurwitz zeta `ζ(s, a) = Σ_{n≥0} (n + a)^{−s}` for real `s > 1`, `a > 0`,
/// by Euler-Maclaurin summation.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(s > 1.0 && a > 0.0, "hurwitz_zeta needs s > 1 and a > 0");
    // B_{2j}/(2j)!
    const B: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
        -3617.0 / 10670622842880000.0,
    ];
    let k = 12usize;
    let mut sum: f64 = (0..k).map(|n| (n as f64 + a).powf(-s)).sum();
    let x = a + k as f64;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // Rising factorial s(s+1)…(s+2j−2) times x^{−s−2j+1}.
    let mut rising = s;
    let mut xp = x.powf(-s - 1.0);
    for (j, b) in B.iter().enumerate() {
        sum += b * rising * xp;
        let m = 2.0 * j as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        xp /= x * x;
    }
    sum
}

/// Regularized `∏_{n∈Z} (n − w₁)(n − w₂)` for `w₁, w₂` off the integers.
///
/// Uses `ζ'(0) = −log(w₁w₂) − 2 log 2π − Σ_{n≥1} log[(1 − w₁²/n²)(1 − w₂²/n²)]`,
/// summing the first terms directly and the rest through `ζ(2k, M)`.
pub fn zeta_det_pair(w1: C64, w2: C64) -> C64 {
    let wmax = w1.norm().max(w2.norm());
    let m = (4.0 * wmax).ceil().max(8.0) as u64;
    let mut log_prod = C64::new(0.0, 0.0);
    for n in 1..m {
        let n2 = (n * n) as f64;
        log_prod += (C64::new(1.0, 0.0) - w1 * w1 / n2).ln() + (C64::new(1.0, 0.0) - w2 * w2 / n2).ln();
    }
    // Σ_{n≥M} log(1 − w²/n²) = −Σ_k w^{2k} ζ(2k, M)/k.
    let (mut p1, mut p2) = (w1 * w1, w2 * w2);
    for k in 1..200 {
        let term = (p1 + p2) * hurwitz_zeta(2.0 * k as f64, m as f64) / k as f64;
        log_prod -= term;
        if term.norm() < 1e-18 * (1.0 + log_prod.norm()) {
            break;
        }
        p1 *= w1 * w1;
        p2 *= w2 * w2;
    }
    let zeta_prime = -(w1 * w2).ln() - 2.0 * (2.0 * PI).ln() - log_prod;
    (-zeta_prime).exp()
}

/// Zeta-regularized determinant of the Laplacian in `degree` for the
/// canonical form; the zero mode is dropped when `λ = 1`.
pub fn zeta_det_exact(lambda: C64, length: f64, degree: usize) -> Result<C64> {
    if degree > 1 {
        return Err(Error::Dimension(format!("the circle has no degree {degree}")));
    }
    let spec = exact_spectrum_circle(lambda, length)?;
    if spec.has_zero_mode() {
        // ζ(0) = −1 for the primed family: det' = L².
        return Ok(C64::new(length * length, 0.0));
    }
    let z = spec.z();
    Ok(zeta_det_pair(z, -z))
}

/// Determinant of `d*d` for the Hermitian metric `|e^{φ₀}|²` instead of the
/// bilinear form: eigenvalues `|2πn + ℓ·(−i)|²/L²`, i.e. `w = a ± ib` with
/// `a = −arg λ/2π`, `b = ln|λ|/2π`.
pub fn hermitian_det(lambda: C64, length: f64) -> Result<C64> {
    let spec = exact_spectrum_circle(lambda, length)?;
    if spec.has_zero_mode() {
        return Ok(C64::new(length * length, 0.0));
    }
    let a = -spec.ell.im / (2.0 * PI);
    let b = spec.ell.re / (2.0 * PI);
    Ok(zeta_det_pair(C64::new(a, b), C64::new(a, -b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::c;

    #[test]
    fn hurwitz_matches_riemann_at_one() {
        assert!((hurwitz_zeta(2.0, 1.0) - PI * PI / 6.0).abs() < 1e-15);
        assert!((hurwitz_zeta(4.0, 1.0) - PI.powi(4) / 90.0).abs() < 1e-15);
    }

    #[test]
    fn trivial_holonomy_spectrum() {
        let s = exact_spectrum_circle(c(1.0, 0.0), 2.0 * PI).unwrap();
        for n in -3..=3 {
            assert!((s.eigenvalue(n) - c((n * n) as f64, 0.0)).norm() < 1e-13);
        }
        assert_eq!(s.count_within(0.5), 1);
    }

    #[test]
    fn antiperiodic_has_no_zero_mode() {
        let s = exact_spectrum_circle(c(-1.0, 0.0), 2.0 * PI).unwrap();
        assert_eq!(s.count_within(0.1), 0);
        assert!((s.eigenvalue(0) - c(-0.25, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn determinant_at_minus_one() {
        let d = zeta_det_exact(c(-1.0, 0.0), 2.0 * PI, 0).unwrap();
        assert!((d - c(-4.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn determinant_at_two_is_length_independent() {
        for l in [2.0 * PI, 4.0 * PI, 1.0] {
            let d = zeta_det_exact(c(2.0, 0.0), l, 1).unwrap();
            assert!((d - c(0.5, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn conjugate_holonomy_conjugates() {
        let lam = c(0.3, 1.7);
        let a = zeta_det_exact(lam, 2.0 * PI, 0).unwrap();
        let b = zeta_det_exact(lam.conj(), 2.0 * PI, 0).unwrap();
        assert!((a.conj() - b).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn hermitian_unitary_value() {
        // |λ| = 1: 2 − 2cos α.
        let alpha = 1.1;
        let d = hermitian_det(C64::from_polar(1.0, alpha), 2.0 * PI).unwrap();
        assert!((d - c(2.0 - 2.0 * alpha.cos(), 0.0)).norm() < 1e-12);
    }
}
