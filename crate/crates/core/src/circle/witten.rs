//! Witten deformation experiments on the grid.
//!
//! All spectra are taken in the conjugated frame `ũ = e^{−Tf}u`
//! ([`build_conjugated`]), where the Grams stay those of the undeformed
//! form and the deformation sits in the differential. This keeps entries of
//! moderate size for large `T`.

use serde::Serialize;

use crate::complex_torsion::{torsion_form, BilinearStructure, CohomologyData};
use crate::error::{Error, Result};
use crate::numkernel::{eigenvalues, inverse, lu_det, CMatrix, C64};
use crate::thom_smale::{build_thom_smale, milnor_torsion};

use super::derham::de_rham_matrices;
use super::discrete::{band_complex, build_conjugated, build_discrete, midpoint, node, spectral_cut, Stencil};
use super::model::{witten_deform, CircleModel};

/// Small-band data of the Witten Laplacians at one `T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallSpectrum {
    /// Eigenvalues with `|μ| ≤ threshold`, per degree, summed over summands.
    pub counts: [usize; 2],
    /// Sum of the small eigenvalues per degree.
    pub trace: [C64; 2],
    /// Largest small-band magnitude over both degrees.
    pub small_max: f64,
    /// Smallest large-band magnitude over both degrees.
    pub large_min: f64,
}

/// Count the eigenvalues below `threshold` after deforming by `t`.
///
/// Fails with a resolution error if some eigenvalue lies within 10% of the
/// threshold, since the count is then not trustworthy.
pub fn small_spectrum_dims(model: &CircleModel, t: f64, n: usize, threshold: f64) -> Result<SmallSpectrum> {
    let mut out =
        SmallSpectrum { counts: [0, 0], trace: [C64::new(0.0, 0.0); 2], small_max: 0.0, large_min: f64::INFINITY };
    for k in 0..model.rank() {
        let deformed = witten_deform(&model.component(k), t)?;
        let ops = build_conjugated(&deformed, n, Stencil::Exponential)?;
        for (deg, lap) in [&ops.lap0, &ops.lap1].into_iter().enumerate() {
            for z in eigenvalues(lap)? {
                let r = z.norm();
                if (r - threshold).abs() < 0.1 * threshold {
                    return Err(Error::Resolution(format!(
                        "eigenvalue {z:.4} within 10% of the threshold {threshold} at T = {t}"
                    )));
                }
                if r <= threshold {
                    out.counts[deg] += 1;
                    out.trace[deg] += z;
                    out.small_max = out.small_max.max(r);
                } else {
                    out.large_min = out.large_min.min(r);
                }
            }
        }
    }
    Ok(out)
}

/// Pair two spectra greedily by nearest distance and return the largest gap.
pub fn spectral_mismatch(a: &[C64], b: &[C64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!("spectra of sizes {} and {}", a.len(), b.len())));
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for z in a {
        let (j, dist) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, w)| (j, (z - w).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("equal lengths");
        used[j] = true;
        worst = worst.max(dist);
    }
    Ok(worst)
}

/// Compare `e^{−Tf} Δ_{b_T} e^{Tf}` with the conjugated-frame Laplacian.
///
/// Returns the largest eigenvalue mismatch over both degrees, relative to
/// the spectral radius. Fails when it exceeds `1e-10`.
pub fn conjugation_isospectral_check(model: &CircleModel, t: f64, n: usize) -> Result<f64> {
    conjugation_isospectral_check_with(model, t, n, Stencil::Exponential)
}

pub fn conjugation_isospectral_check_with(model: &CircleModel, t: f64, n: usize, stencil: Stencil) -> Result<f64> {
    let bound = 1e-10;
    let mut worst: f64 = 0.0;
    for k in 0..model.rank() {
        let deformed = witten_deform(&model.component(k), t)?;
        let direct = build_discrete(&deformed, n)?;
        let conj = build_conjugated(&deformed, n, stencil)?;
        let at_nodes: Vec<f64> = (0..n).map(|j| deformed.f(node(&deformed, n, j))).collect();
        let at_mids: Vec<f64> = (0..n).map(|j| deformed.f(midpoint(&deformed, n, j))).collect();
        for (lap, rhs, f) in [(&direct.lap0, &conj.lap0, &at_nodes), (&direct.lap1, &conj.lap1, &at_mids)] {
            let lhs = CMatrix::from_fn(n, n, |i, j| lap[(i, j)] * (t * (f[j] - f[i])).exp());
            let el = eigenvalues(&lhs)?;
            let er = eigenvalues(rhs)?;
            let radius = er.iter().map(|z| z.norm()).fold(0.0, f64::max);
            worst = worst.max(spectral_mismatch(&el, &er)? / radius);
        }
    }
    if worst > bound {
        return Err(Error::StencilMismatch { mismatch: worst, bound });
    }
    Ok(worst)
}

/// One row of [`small_band_transport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportRow {
    pub t: f64,
    /// Scaled ratio of the transported small-band torsion to the Milnor torsion.
    pub ratio: C64,
    /// `|log ratio|`.
    pub log_abs: f64,
}

/// Transport the small-band torsion to the Thom-Smale complex and compare
/// with the Milnor torsion, rescaled by `(T/π)^{−χ'} e^{2 Tr_s[f] T}`.
pub fn small_band_transport(model: &CircleModel, tlist: &[f64], n: usize) -> Result<Vec<TransportRow>> {
    if !model.is_acyclic() {
        return Err(Error::Unsupported("the transported torsion comparison needs an acyclic bundle".into()));
    }
    let mut rows = Vec::with_capacity(tlist.len());
    for &t in tlist {
        if !(t > 0.0) {
            return Err(Error::Model(format!("deformation parameter {t} must be positive")));
        }
        let mut ratio = C64::new(1.0, 0.0);
        for k in 0..model.rank() {
            ratio *= transport_line(&model.component(k).undeformed(), t, n)?;
        }
        rows.push(TransportRow { t, ratio, log_abs: ratio.ln().norm() });
    }
    Ok(rows)
}

fn transport_line(model: &CircleModel, t: f64, n: usize) -> Result<C64> {
    let ms = model.morse_system()?;
    let counts = ms.index_counts();
    let deformed = witten_deform(model, t)?;
    let ops = build_conjugated(&deformed, n, Stencil::Exponential)?;
    let cut = spectral_cut(&ops, 1.0)?;
    if cut.dims()[..] != counts[..] {
        return Err(Error::Resolution(format!(
            "small band has dimensions {:?}, expected {:?} at T = {t}",
            cut.dims(),
            counts
        )));
    }
    let (_, band_forms) = band_complex(&ops, &cut)?;

    // Back to the original frame, then integrate.
    let p = de_rham_matrices(model, n)?;
    let weight =
        |f: &dyn Fn(usize) -> f64, v: &CMatrix| CMatrix::from_fn(n, v.cols(), |i, j| v[(i, j)] * (t * f(i)).exp());
    let a0 = &p.p0 * &weight(&|j| model.f(node(model, n, j)), &cut.bases[0]);
    let a1 = &p.p1 * &weight(&|j| model.f(midpoint(model, n, j)), &cut.bases[1]);
    for (deg, a) in [&a0, &a1].into_iter().enumerate() {
        if lu_det(a).map(|d| d.norm()).unwrap_or(0.0) == 0.0 {
            return Err(Error::NotInvertible(deg));
        }
    }
    let inv0 = inverse(&a0)?;
    let inv1 = inverse(&a1)?;
    let pushed = BilinearStructure::new(vec![
        &(&inv0.transpose() * band_forms.gram(0)) * &inv0,
        &(&inv1.transpose() * band_forms.gram(1)) * &inv1,
    ])?;
    let empty = CohomologyData::new(vec![CMatrix::zeros(counts[0], 0), CMatrix::zeros(counts[1], 0)]);
    let (ts, _) = build_thom_smale(&ms, &model.critical_forms()?)?;
    let transported = torsion_form(&ts, &pushed, &empty)?;
    let milnor = milnor_torsion(&ms, &model.critical_forms()?, &empty)?;

    let chi_prime = ms.chi_prime() as f64;
    let tr_s: f64 = (0..ms.points().len())
        .map(|j| {
            let sign = if ms.points()[j].index % 2 == 0 { 1.0 } else { -1.0 };
            sign * model.f(model.morse_point_position(j))
        })
        .sum();
    let scale = (t / std::f64::consts::PI).powf(-chi_prime) * (2.0 * tr_s * t).exp();
    Ok(transported / milnor * scale)
}

/// Least-squares slope and coefficient of determination of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, r2)
}
