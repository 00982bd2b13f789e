//! Comparison of Ray-Singer and Milnor torsion on the circle.
//!
//! Valid when the Kamber-Tondeur form vanishes in the sense that matters
//! here: the transported form is balanced between ascending and descending
//! arcs of the potential. The canonical form is always balanced.

use crate::complex_torsion::CohomologyData;
use crate::error::{Error, Result};
use crate::numkernel::{CMatrix, C64};
use crate::thom_smale::milnor_torsion;

use super::exact::hermitian_det;
use super::model::{theta_form, CircleModel};
use super::rs::{rs_torsion, RsMethod};

const BALANCE_TOL: f64 = 1e-10;

fn with_default_potential(model: &CircleModel) -> Result<CircleModel> {
    match model.potential() {
        Some(_) => Ok(model.clone()),
        None => model.clone().with_potential(1),
    }
}

fn check_scope(model: &CircleModel) -> Result<CircleModel> {
    if !model.is_acyclic() {
        return Err(Error::Unsupported("the comparison needs an acyclic bundle".into()));
    }
    let m = with_default_potential(model)?;
    let theta = theta_form(&m, 16);
    if theta.imbalance.norm() > BALANCE_TOL {
        return Err(Error::OutOfScope(theta.imbalance.norm()));
    }
    Ok(m)
}

/// Ray-Singer torsion over Milnor torsion, before calibration.
pub fn bz_raw(model: &CircleModel) -> Result<C64> {
    let m = check_scope(model)?;
    let method = if m.is_canonical() { RsMethod::Exact } else { RsMethod::GelfandYaglom };
    let rs = rs_torsion(&m, 0.0, method)?;
    let ms = m.morse_system()?;
    let dims = ms.index_counts();
    let h = CohomologyData::new(dims.iter().map(|&d| CMatrix::zeros(d * m.rank(), 0)).collect());
    let milnor = milnor_torsion(&ms, &m.critical_forms()?, &h)?;
    Ok(rs / milnor)
}

/// The raw ratio for the canonical form at `λ = 2` on the unit-length-free
/// circle; every other comparison is divided by it.
pub fn bz_calibration() -> Result<C64> {
    bz_raw(&CircleModel::new(2.0 * std::f64::consts::PI, C64::new(2.0, 0.0))?)
}

/// Calibrated ratio; equals 1 in the balanced regime.
pub fn bz_compare(model: &CircleModel) -> Result<C64> {
    Ok(bz_raw(model)? / bz_calibration()?)
}

/// `|bz_compare|` together with the ratio of the bilinear torsion's modulus
/// to the Hermitian Ray-Singer torsion of the canonical form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsoluteComparison {
    pub abs_ratio: f64,
    pub against_hermitian: f64,
}

pub fn absolute_comparison(model: &CircleModel) -> Result<AbsoluteComparison> {
    let abs_ratio = bz_compare(model)?.norm();
    let rs_b = rs_torsion(&model.canonical(), 0.0, RsMethod::Exact)?;
    let mut rs_g = C64::new(1.0, 0.0);
    for &lam in model.holonomies() {
        rs_g /= hermitian_det(lam, model.length())?;
    }
    Ok(AbsoluteComparison { abs_ratio, against_hermitian: rs_b.norm() / rs_g.norm() })
}
