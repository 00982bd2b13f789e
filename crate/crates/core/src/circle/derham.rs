//! Discrete de Rham map from grid forms to Thom-Smale cochains.
//!
//! 0-forms are evaluated at the minima. A 1-form is integrated by the
//! midpoint rule over the unstable arc of each maximum, the arc between its
//! two neighbouring minima; edges reached by crossing the chart boundary
//! are pulled back by `λ^{−1}`. With critical points on grid nodes this is
//! an exact chain map onto the complex of [`CircleModel::morse_system`].

use crate::error::{Error, Result};
use crate::numkernel::{CMatrix, C64};

use super::model::CircleModel;

/// `P₀` (minima × nodes) and `P₁` (maxima × edges).
#[derive(Debug, Clone)]
pub struct DeRhamMap {
    pub p0: CMatrix,
    pub p1: CMatrix,
}

pub fn de_rham_matrices(model: &CircleModel, n: usize) -> Result<DeRhamMap> {
    let Some(pot) = model.potential() else {
        return Err(Error::Model("the de Rham map needs a Morse potential".into()));
    };
    if model.rank() != 1 {
        return Err(Error::Unsupported("the de Rham map is built per rank-one summand".into()));
    }
    let k = pot.wells as usize;
    if n % (2 * k) != 0 {
        return Err(Error::Model(format!(
            "critical points fall between grid nodes; use a grid size divisible by {}",
            2 * k
        )));
    }
    let arc = n / (2 * k);
    let h = model.length() / n as f64;
    let lam_inv = model.lambda().inv();
    let mut p0 = CMatrix::zeros(k, n);
    let mut p1 = CMatrix::zeros(k, n);
    // Point c_j sits at θ_{j+1}: minima for even j, maxima for odd j.
    for j in 0..2 * k {
        let m = (j + 1) % (2 * k);
        if j % 2 == 0 {
            p0[(j / 2, m * arc)] = C64::new(1.0, 0.0);
        } else {
            let row = j / 2;
            // Edges from the node of θ_{m−1} up to the node of θ_{m+1}.
            let start = (m as isize - 1) * arc as isize;
            for e in start..start + 2 * arc as isize {
                let (idx, w) =
                    if e < 0 { ((e + n as isize) as usize, lam_inv) } else { (e as usize, C64::new(1.0, 0.0)) };
                p1[(row, idx)] += w * h;
            }
        }
    }
    Ok(DeRhamMap { p0, p1 })
}

/// Apply the de Rham map to a 0-form and a 1-form on the grid.
pub fn de_rham_map(model: &CircleModel, n: usize, zero_form: &[C64], one_form: &[C64]) -> Result<(Vec<C64>, Vec<C64>)> {
    if zero_form.len() != n || one_form.len() != n {
        return Err(Error::Dimension(format!("grid forms must have {n} entries")));
    }
    let p = de_rham_matrices(model, n)?;
    Ok((p.p0.mul_vec(zero_form), p.p1.mul_vec(one_form)))
}

/// `‖∂P₀ − P₁d‖` relative to `‖d‖`, for the grid difference `d`.
pub fn chain_defect(model: &CircleModel, n: usize, d: &CMatrix) -> Result<f64> {
    let p = de_rham_matrices(model, n)?;
    let ms = model.morse_system()?;
    let (complex, _) = crate::thom_smale::build_thom_smale(&ms, &crate::thom_smale::CriticalForms::standard(&ms))?;
    let lhs = complex.differential(0) * &p.p0;
    let rhs = &p.p1 * d;
    Ok((&lhs - &rhs).max_abs() / d.max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::discrete::build_discrete;
    use crate::numkernel::c;
    use std::f64::consts::PI;

    #[test]
    fn constants_evaluate_at_minima() {
        let m = CircleModel::new(2.0 * PI, c(1.0, 0.0)).unwrap().with_potential(2).unwrap();
        let ones = vec![c(3.0, 0.0); 16];
        let (a, _) = de_rham_map(&m, 16, &ones, &ones).unwrap();
        assert_eq!(a, vec![c(3.0, 0.0); 2]);
    }

    #[test]
    fn exact_chain_map() {
        for wells in [1, 2, 3] {
            let m = CircleModel::new(2.0 * PI, c(2.0, 0.7)).unwrap().with_potential(wells).unwrap();
            let ops = build_discrete(&m, 48).unwrap();
            assert!(chain_defect(&m, 48, &ops.d).unwrap() < 1e-14);
        }
    }

    #[test]
    fn misaligned_grid_rejected() {
        let m = CircleModel::new(2.0 * PI, c(2.0, 0.0)).unwrap().with_potential(2).unwrap();
        assert!(matches!(de_rham_matrices(&m, 18), Err(Error::Model(_))));
    }
}
