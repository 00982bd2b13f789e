//! Functional determinants on the circle from the monodromy of `y'' = V y`.
//!
//! Writing `u = e^{−φ} y` turns the degree-0 Laplacian `−e^{−2φ}(e^{2φ}u')'`
//! into the periodic Schrödinger operator `−∂² + V₀` with
//! `V₀ = φ'' + φ'²`; in degree one `V₁ = φ'² − φ''`. The twisted boundary
//! condition becomes plain periodicity because `e^{−φ}` carries the
//! holonomy. For a periodic Hill operator the regularized determinant is
//! `c · det(I − M)`, `M` the monodromy over one period, and the constant `c`
//! is fixed by the canonical case.

use crate::error::{Error, Result};
use crate::numkernel::C64;

use super::model::{CircleModel, Line};

/// `det_ζ = GY_CALIBRATION · det(I − M)`.
///
/// Obtained once by comparing with the closed-form determinant for the
/// canonical form at `λ = 2`; the test suite recomputes it.
pub const GY_CALIBRATION: f64 = -1.0;

/// Step control for the Dormand-Prince integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-12, atol: 1e-14, max_steps: 2_000_000 }
    }
}

type State = [C64; 4];

fn rhs(v: C64, y: &State) -> State {
    [y[1], v * y[0], y[3], v * y[2]]
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..4 {
            out[i] += k[i] * (h * c);
        }
    }
    out
}

/// Monodromy `[[y₁, y₂], [y₁', y₂']]` at `L` of `y'' = V(θ) y`.
pub fn monodromy(v: impl Fn(f64) -> C64, length: f64, opts: OdeOptions) -> Result<[[C64; 2]; 2]> {
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A2: [f64; 1] = [1.0 / 5.0];
    const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
    const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
    const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
    const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
    const B5: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
    const E: [f64; 7] =
        [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let mut y: State = [one, zero, zero, one];
    let mut t = 0.0;
    let mut h = length / 64.0;
    let hmin = length * 1e-13;
    let mut steps = 0;
    while t < length {
        if steps >= opts.max_steps {
            return Err(Error::Stiff(format!("step budget exhausted at θ = {t:.6}")));
        }
        steps += 1;
        if t + h > length {
            h = length - t;
        }
        let k1 = rhs(v(t), &y);
        let k2 = rhs(v(t + C[1] * h), &axpy(&y, h, &[(A2[0], &k1)]));
        let k3 = rhs(v(t + C[2] * h), &axpy(&y, h, &[(A3[0], &k1), (A3[1], &k2)]));
        let k4 = rhs(v(t + C[3] * h), &axpy(&y, h, &[(A4[0], &k1), (A4[1], &k2), (A4[2], &k3)]));
        let k5 = rhs(v(t + C[4] * h), &axpy(&y, h, &[(A5[0], &k1), (A5[1], &k2), (A5[2], &k3), (A5[3], &k4)]));
        let k6 =
            rhs(v(t + C[5] * h), &axpy(&y, h, &[(A6[0], &k1), (A6[1], &k2), (A6[2], &k3), (A6[3], &k4), (A6[4], &k5)]));
        let y5 = axpy(&y, h, &[(B5[0], &k1), (B5[2], &k3), (B5[3], &k4), (B5[4], &k5), (B5[5], &k6)]);
        let k7 = rhs(v(t + h), &y5);
        let err_vec =
            axpy(&[zero; 4], h, &[(E[0], &k1), (E[2], &k3), (E[3], &k4), (E[4], &k5), (E[5], &k6), (E[6], &k7)]);
        let scale = y.iter().chain(y5.iter()).map(|z| z.norm()).fold(0.0, f64::max);
        let err = err_vec.iter().map(|z| z.norm()).fold(0.0, f64::max) / (opts.atol + opts.rtol * scale);
        if err <= 1.0 {
            t += h;
            y = y5;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < hmin && t < length {
            return Err(Error::Stiff(format!("step size underflow at θ = {t:.6}")));
        }
    }
    Ok([[y[0], y[2]], [y[1], y[3]]])
}

/// `det(I − M)` for `y'' = V y` over one period.
pub fn gy_raw(v: impl Fn(f64) -> C64, length: f64, opts: OdeOptions) -> Result<C64> {
    let m = monodromy(v, length, opts)?;
    let one = C64::new(1.0, 0.0);
    Ok((one - m[0][0]) * (one - m[1][1]) - m[0][1] * m[1][0])
}

pub(crate) fn line_potential(line: Line<'_>, degree: usize) -> impl Fn(f64) -> C64 + '_ {
    move |th| {
        let (_, d1, d2) = line.phi(th);
        if degree == 0 {
            d2 + d1 * d1
        } else {
            d1 * d1 - d2
        }
    }
}

/// Regularized determinant of the degree-`degree` Laplacian of a rank-one model.
pub fn gelfand_yaglom_det(model: &CircleModel, degree: usize) -> Result<C64> {
    gelfand_yaglom_det_with(model, degree, OdeOptions::default())
}

pub fn gelfand_yaglom_det_with(model: &CircleModel, degree: usize, opts: OdeOptions) -> Result<C64> {
    if degree > 1 {
        return Err(Error::Dimension(format!("the circle has no degree {degree}")));
    }
    let mut det = C64::new(1.0, 0.0);
    for line in model.lines() {
        det *= GY_CALIBRATION * gy_raw(line_potential(line, degree), model.length(), opts)?;
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::c;

    #[test]
    fn free_particle_monodromy() {
        let m = monodromy(|_| c(0.0, 0.0), 2.0, OdeOptions::default()).unwrap();
        assert!((m[0][1] - c(2.0, 0.0)).norm() < 1e-12);
        assert!((m[0][0] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn constant_potential_determinant() {
        // V = m²: det = 4 sinh²(mL/2).
        let (mass, l) = (0.7, 3.0);
        let d = GY_CALIBRATION * gy_raw(|_| c(mass * mass, 0.0), l, OdeOptions::default()).unwrap();
        let expected = 4.0 * (mass * l / 2.0).sinh().powi(2);
        assert!((d - c(expected, 0.0)).norm() < 1e-10 * expected);
    }
}
