use super::matrix::{CMatrix, C64};
use crate::config::Tolerances;
use crate::error::{Error, Result};

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Determinant by partial-pivot elimination. The permutation sign is tracked exactly.
pub fn lu_det(m: &CMatrix) -> Result<C64> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("determinant of {}x{} matrix", m.rows(), m.cols())));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut det = C64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm())).unwrap();
        if a[(p, k)] == zero() {
            return Ok(zero());
        }
        if p != k {
            for j in 0..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = t;
            }
            det = -det;
        }
        let piv = a[(k, k)];
        det *= piv;
        for i in k + 1..n {
            let f = a[(i, k)] / piv;
            if f == zero() {
                continue;
            }
            for j in k + 1..n {
                let t = a[(k, j)];
                a[(i, j)] -= f * t;
            }
        }
    }
    Ok(det)
}

/// Logarithm of the determinant, as a sum of pivot logarithms.
///
/// Avoids overflow for large well-scaled matrices; the imaginary part is
/// only defined modulo `2π`.
pub fn lu_log_det(m: &CMatrix) -> Result<C64> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("determinant of {}x{} matrix", m.rows(), m.cols())));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm())).unwrap();
        if a[(p, k)] == zero() {
            return Err(Error::Singular { pivot: k });
        }
        if p != k {
            for j in 0..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = t;
            }
            acc += C64::new(0.0, std::f64::consts::PI);
        }
        let piv = a[(k, k)];
        acc += piv.ln();
        for i in k + 1..n {
            let f = a[(i, k)] / piv;
            if f == zero() {
                continue;
            }
            for j in k + 1..n {
                let t = a[(k, j)];
                a[(i, j)] -= f * t;
            }
        }
    }
    Ok(acc)
}

/// Solve `m x = rhs` with partial pivoting.
///
/// A pivot smaller than `tol.singular_pivot` times the largest entry of its
/// original row is reported as [`Error::Singular`].
pub fn solve_with(m: &CMatrix, rhs: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    if !m.is_square() || rhs.rows() != m.rows() {
        return Err(Error::Dimension(format!(
            "solve: matrix {}x{}, right-hand side {}x{}",
            m.rows(),
            m.cols(),
            rhs.rows(),
            rhs.cols()
        )));
    }
    let n = m.rows();
    let k_rhs = rhs.cols();
    let mut a = m.clone();
    let mut b = rhs.clone();
    let mut row_scale: Vec<f64> = (0..n).map(|i| m.row(i).iter().map(|z| z.norm()).fold(0.0, f64::max)).collect();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm())).unwrap();
        if p != k {
            for j in 0..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = t;
            }
            for j in 0..k_rhs {
                let t = b[(k, j)];
                b[(k, j)] = b[(p, j)];
                b[(p, j)] = t;
            }
            row_scale.swap(k, p);
        }
        let piv = a[(k, k)];
        if piv.norm() <= tol.singular_pivot * row_scale[k].max(f64::MIN_POSITIVE) {
            return Err(Error::Singular { pivot: k });
        }
        for i in k + 1..n {
            let f = a[(i, k)] / piv;
            if f == zero() {
                continue;
            }
            for j in k + 1..n {
                let t = a[(k, j)];
                a[(i, j)] -= f * t;
            }
            for j in 0..k_rhs {
                let t = b[(k, j)];
                b[(i, j)] -= f * t;
            }
        }
    }
    let mut x = CMatrix::zeros(n, k_rhs);
    for j in 0..k_rhs {
        for i in (0..n).rev() {
            let mut s = b[(i, j)];
            for l in i + 1..n {
                s -= a[(i, l)] * x[(l, j)];
            }
            x[(i, j)] = s / a[(i, i)];
        }
    }
    Ok(x)
}

pub fn solve(m: &CMatrix, rhs: &CMatrix) -> Result<CMatrix> {
    solve_with(m, rhs, &Tolerances::default())
}

pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    solve(m, &CMatrix::identity(m.rows()))
}

/// Result of rank-revealing elimination with complete pivoting.
#[derive(Debug, Clone)]
pub struct RankReveal {
    pub rank: usize,
    /// Original indices of the pivot columns; the matrix is injective on their span.
    pub pivot_cols: Vec<usize>,
    /// Kernel basis, one column per free variable.
    pub kernel: CMatrix,
}

/// Numerical rank with threshold `rel` times the largest pivot.
pub fn rank_reveal(m: &CMatrix, rel: f64) -> RankReveal {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    let mut first_pivot = 0.0;
    for k in 0..rows.min(cols) {
        let mut best = (k, k, -1.0);
        for i in k..rows {
            for j in k..cols {
                let v = a[(i, j)].norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        let (pi, pj, pv) = best;
        if k == 0 {
            first_pivot = pv;
        }
        if pv <= rel * first_pivot || pv == 0.0 {
            break;
        }
        if pi != k {
            for j in 0..cols {
                let t = a[(k, j)];
                a[(k, j)] = a[(pi, j)];
                a[(pi, j)] = t;
            }
        }
        if pj != k {
            for i in 0..rows {
                let t = a[(i, k)];
                a[(i, k)] = a[(i, pj)];
                a[(i, pj)] = t;
            }
            perm.swap(k, pj);
        }
        let piv = a[(k, k)];
        for i in k + 1..rows {
            let f = a[(i, k)] / piv;
            a[(i, k)] = zero();
            if f == zero() {
                continue;
            }
            for j in k + 1..cols {
                let t = a[(k, j)];
                a[(i, j)] -= f * t;
            }
        }
        rank += 1;
    }
    // Kernel: U[:r,:r] x_p = -U[:r, r+f] for each free column f.
    let nfree = cols - rank;
    let mut kernel = CMatrix::zeros(cols, nfree);
    for f in 0..nfree {
        let mut xp = vec![zero(); rank];
        for i in (0..rank).rev() {
            let mut s = -a[(i, rank + f)];
            for l in i + 1..rank {
                s -= a[(i, l)] * xp[l];
            }
            xp[i] = s / a[(i, i)];
        }
        for i in 0..rank {
            kernel[(perm[i], f)] = xp[i];
        }
        kernel[(perm[rank + f], f)] = C64::new(1.0, 0.0);
    }
    RankReveal { rank, pivot_cols: perm[..rank].to_vec(), kernel }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::matrix::c;

    #[test]
    fn identity_and_diagonal_determinants() {
        assert_eq!(lu_det(&CMatrix::identity(3)).unwrap(), c(1.0, 0.0));
        let d = CMatrix::diag(&[c(2.0, 0.0), c(0.0, 3.0)]);
        assert!((lu_det(&d).unwrap() - c(0.0, 6.0)).norm() < 1e-15);
    }

    #[test]
    fn permutation_sign_is_tracked() {
        let p = CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(lu_det(&p).unwrap(), c(-1.0, 0.0));
    }

    #[test]
    fn log_det_agrees() {
        let m = CMatrix::from_real(2, 2, &[0.0, 2.0, 3.0, 1.0]).unwrap();
        let l = lu_log_det(&m).unwrap().exp();
        assert!((l - lu_det(&m).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn non_square_is_rejected() {
        assert!(matches!(lu_det(&CMatrix::zeros(2, 3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn solve_trivial_systems() {
        let rhs = CMatrix::column(&[c(1.0, 2.0), c(-3.0, 0.5)]);
        assert_eq!(solve(&CMatrix::identity(2), &rhs).unwrap(), rhs);
        let m = CMatrix::diag(&[c(2.0, 0.0), c(4.0, 0.0)]);
        let x = solve(&m, &CMatrix::column(&[c(2.0, 0.0), c(4.0, 0.0)])).unwrap();
        assert!((x[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((x[(1, 0)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_reports_pivot() {
        let m = CMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        let err = solve(&m, &CMatrix::identity(2)).unwrap_err();
        assert_eq!(err, Error::Singular { pivot: 1 });
    }

    #[test]
    fn rank_and_kernel() {
        let m = CMatrix::from_real(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]).unwrap();
        let rr = rank_reveal(&m, 1e-10);
        assert_eq!(rr.rank, 1);
        assert_eq!(rr.kernel.cols(), 2);
        let mk = &m * &rr.kernel;
        assert!(mk.max_abs() < 1e-13);
    }
}
