use super::matrix::{CMatrix, C64};
use crate::config::Tolerances;
use crate::error::{Error, Result};

fn form(g: &CMatrix, x: &[C64], y: &[C64]) -> C64 {
    let gy = g.mul_vec(y);
    x.iter().zip(&gy).map(|(a, b)| a * b).sum()
}

/// Basis `S` with `Sᵀ g S = I` for a complex symmetric nondegenerate `g`.
///
/// Gram-Schmidt with respect to `⟨x, y⟩ = xᵀ g y`. The pivot is the remaining
/// vector of largest `|⟨w, w⟩|`; when every remaining vector is isotropic the
/// first one is replaced by `v + w` for the `w` maximising `|⟨v+w, v+w⟩|`.
pub fn bilinear_orthonormalize_with(g: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    if !g.is_square() {
        return Err(Error::Dimension(format!("Gram matrix is {}x{}", g.rows(), g.cols())));
    }
    let n = g.rows();
    let scale = g.max_abs();
    if n > 0 && scale == 0.0 {
        return Err(Error::Degenerate("zero form".into()));
    }
    let defect = g.symmetry_defect();
    if defect > tol.symmetry * scale.max(1.0) {
        return Err(Error::NotSymmetric(defect));
    }
    let mut remaining: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).collect())
        .collect();
    let mut out = CMatrix::zeros(n, n);
    for k in 0..n {
        let norms: Vec<C64> = remaining.iter().map(|w| form(g, w, w)).collect();
        let (mut best, mut best_val) = (0, -1.0);
        for (i, z) in norms.iter().enumerate() {
            if z.norm() > best_val {
                best = i;
                best_val = z.norm();
            }
        }
        if best_val < tol.isotropic * scale {
            // Every remaining direction is isotropic: mix in a partner.
            let v = remaining[0].clone();
            let mut partner = None;
            let mut partner_val = -1.0;
            for (i, w) in remaining.iter().enumerate().skip(1) {
                let s: Vec<C64> = v.iter().zip(w).map(|(a, b)| a + b).collect();
                let val = form(g, &s, &s).norm();
                if val > partner_val {
                    partner_val = val;
                    partner = Some(i);
                }
            }
            match partner {
                Some(i) if partner_val >= tol.isotropic * scale => {
                    let w = remaining[i].clone();
                    for (a, b) in remaining[0].iter_mut().zip(&w) {
                        *a += b;
                    }
                    best = 0;
                }
                _ => return Err(Error::Degenerate(format!("no anisotropic direction left at step {k}"))),
            }
        }
        let v = remaining.swap_remove(best);
        let nv = form(g, &v, &v);
        let root = nv.sqrt();
        let s: Vec<C64> = v.iter().map(|z| z / root).collect();
        for w in remaining.iter_mut() {
            let p = form(g, &s, w);
            for (a, b) in w.iter_mut().zip(&s) {
                *a -= p * b;
            }
        }
        out.set_col(k, &s);
    }
    Ok(out)
}

pub fn bilinear_orthonormalize(g: &CMatrix) -> Result<CMatrix> {
    bilinear_orthonormalize_with(g, &Tolerances::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{lu_det, matrix::c};

    fn check(g: &CMatrix) -> CMatrix {
        let s = bilinear_orthonormalize(g).unwrap();
        let r = &(&s.transpose() * g) * &s;
        let e = &r - &CMatrix::identity(g.rows());
        assert!(e.max_abs() < 1e-9, "SᵀgS - I = {:e}", e.max_abs());
        s
    }

    #[test]
    fn identity_form() {
        let s = check(&CMatrix::identity(3));
        assert!((lu_det(&s).unwrap().norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scalar_square_root() {
        let g = CMatrix::from_real(1, 1, &[4.0]).unwrap();
        let s = check(&g);
        assert!((s[(0, 0)].norm() - 0.5).abs() < 1e-15);
        let d = lu_det(&s).unwrap();
        assert!((d * d - c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hyperbolic_plane_uses_mixing() {
        let g = CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let s = check(&g);
        let d = lu_det(&s).unwrap();
        // det(S)^2 det(g) = 1 with det g = -1
        assert!((d * d + c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn degenerate_rejected() {
        let g = CMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(bilinear_orthonormalize(&g), Err(Error::Degenerate(_))));
    }

    #[test]
    fn asymmetric_rejected() {
        let g = CMatrix::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(matches!(bilinear_orthonormalize(&g), Err(Error::NotSymmetric(_))));
    }
}
