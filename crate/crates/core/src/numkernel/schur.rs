//! Complex Schur decomposition by Hessenberg reduction and shifted QR,
//! eigenvalue reordering, and spectral invariant subspaces.

use super::matrix::{CMatrix, C64};
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// `m = Q T Q*` with `Q` unitary and `T` upper triangular.
#[derive(Debug, Clone)]
pub struct SchurDecomposition {
    pub q: CMatrix,
    pub t: CMatrix,
    /// Diagonal of `t`, in the order the iteration left them.
    pub eigenvalues: Vec<C64>,
}

/// A region of the complex plane used to select part of a spectrum.
pub trait SpectralRegion {
    fn contains(&self, z: C64) -> bool;
    /// Distance from `z` to the region boundary.
    fn boundary_distance(&self, z: C64) -> f64;
}

/// Closed disk `|z| <= radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub radius: f64,
}

impl SpectralRegion for Disk {
    fn contains(&self, z: C64) -> bool {
        z.norm() <= self.radius
    }
    fn boundary_distance(&self, z: C64) -> f64 {
        (z.norm() - self.radius).abs()
    }
}

/// Givens rotation `G = [[c, s], [-conj(s), c]]` with `G [a; b] = [r; 0]`.
#[derive(Debug, Clone, Copy)]
struct Givens {
    c: f64,
    s: C64,
}

impl Givens {
    fn zeroing(a: C64, b: C64) -> Self {
        let na = a.norm();
        let nb = b.norm();
        if nb == 0.0 {
            return Givens { c: 1.0, s: C64::new(0.0, 0.0) };
        }
        if na == 0.0 {
            return Givens { c: 0.0, s: C64::new(1.0, 0.0) };
        }
        let r = na.hypot(nb);
        Givens { c: na / r, s: (a / na) * b.conj() / r }
    }

    /// Rows `k, k+1` of `m`, columns in `cols`, replaced by `G [row_k; row_k+1]`.
    fn apply_rows(&self, m: &mut CMatrix, k: usize, cols: std::ops::Range<usize>) {
        for j in cols {
            let x = m[(k, j)];
            let y = m[(k + 1, j)];
            m[(k, j)] = x * self.c + self.s * y;
            m[(k + 1, j)] = -self.s.conj() * x + y * self.c;
        }
    }

    /// Columns `k, k+1` of `m`, rows in `rows`, replaced by `[col_k, col_k+1] G*`.
    fn apply_cols(&self, m: &mut CMatrix, k: usize, rows: std::ops::Range<usize>) {
        for i in rows {
            let x = m[(i, k)];
            let y = m[(i, k + 1)];
            m[(i, k)] = x * self.c + self.s.conj() * y;
            m[(i, k + 1)] = -self.s * x + y * self.c;
        }
    }
}

/// Householder reduction to upper Hessenberg form. Returns `(H, Q)` with `m = Q H Q*`.
pub fn hessenberg(m: &CMatrix, want_q: bool) -> (CMatrix, Option<CMatrix>) {
    let n = m.rows();
    let mut h = m.clone();
    let mut q = if want_q { Some(CMatrix::identity(n)) } else { None };
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vn: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vn;
        }
        // H <- (I - 2 v v*) H on rows k+1..n
        for j in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for (a, vi) in v.iter().enumerate() {
                s += vi.conj() * h[(k + 1 + a, j)];
            }
            s *= 2.0;
            for (a, vi) in v.iter().enumerate() {
                h[(k + 1 + a, j)] -= vi * s;
            }
        }
        // H <- H (I - 2 v v*) on columns k+1..n
        let reflect_cols = |mat: &mut CMatrix| {
            for i in 0..n {
                let mut s = C64::new(0.0, 0.0);
                for (a, vi) in v.iter().enumerate() {
                    s += mat[(i, k + 1 + a)] * vi;
                }
                s *= 2.0;
                for (a, vi) in v.iter().enumerate() {
                    mat[(i, k + 1 + a)] -= s * vi.conj();
                }
            }
        };
        reflect_cols(&mut h);
        if let Some(q) = q.as_mut() {
            reflect_cols(q);
        }
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
    (h, q)
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    // Eigenvalue of [[a, b], [c, d]] closest to d.
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Shifted QR on a Hessenberg matrix. When `q` is given, full Schur form is
/// produced and `q` accumulates the transformations; otherwise only the
/// active blocks are updated, which is enough for eigenvalues.
fn hqr(h: &mut CMatrix, mut q: Option<&mut CMatrix>, tol: &Tolerances) -> Result<()> {
    let n = h.rows();
    if n == 0 {
        return Ok(());
    }
    let full = q.is_some();
    let eps = f64::EPSILON;
    let budget = tol.qr_sweeps_per_n2.saturating_mul(n * n).max(100);
    let mut sweeps = 0usize;
    let mut hi = n - 1;
    let mut iter_since_deflation = 0usize;
    let hnorm = h.max_abs().max(f64::MIN_POSITIVE);
    while hi > 0 {
        // Locate the start of the unreduced block ending at `hi`.
        let mut l = hi;
        while l > 0 {
            let s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let s = if s == 0.0 { hnorm } else { s };
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = C64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter_since_deflation = 0;
            continue;
        }
        sweeps += 1;
        iter_since_deflation += 1;
        if sweeps > budget {
            return Err(Error::NoConvergence { lo: l, hi, sweeps });
        }
        let shift = if iter_since_deflation % 11 == 10 {
            // Exceptional shift to break cycles.
            let sub = h[(hi, hi - 1)].norm();
            h[(hi, hi)] + C64::new(0.75 * sub, 0.25 * sub)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for k in l..=hi {
            h[(k, k)] -= shift;
        }
        let col_end = if full { n } else { hi + 1 };
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let g = Givens::zeroing(h[(k, k)], h[(k + 1, k)]);
            g.apply_rows(h, k, k..col_end);
            h[(k + 1, k)] = C64::new(0.0, 0.0);
            rots.push(g);
        }
        let row_start = if full { 0 } else { l };
        for (idx, g) in rots.iter().enumerate() {
            let k = l + idx;
            g.apply_cols(h, k, row_start..(k + 2).min(hi + 1));
            if let Some(q) = q.as_deref_mut() {
                g.apply_cols(q, k, 0..n);
            }
        }
        for k in l..=hi {
            h[(k, k)] += shift;
        }
    }
    Ok(())
}

/// Full complex Schur decomposition.
pub fn schur_with(m: &CMatrix, tol: &Tolerances) -> Result<SchurDecomposition> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("Schur of {}x{} matrix", m.rows(), m.cols())));
    }
    let (mut t, q) = hessenberg(m, true);
    let mut q = q.unwrap();
    hqr(&mut t, Some(&mut q), tol)?;
    let n = t.rows();
    for i in 0..n {
        for j in 0..i {
            t[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    let eigenvalues = (0..n).map(|i| t[(i, i)]).collect();
    Ok(SchurDecomposition { q, t, eigenvalues })
}

pub fn schur(m: &CMatrix) -> Result<SchurDecomposition> {
    schur_with(m, &Tolerances::default())
}

/// Lexicographic (real part, then imaginary part) ordering of eigenvalues.
pub fn sort_spectrum(v: &mut [C64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// All eigenvalues with multiplicity, sorted by real part then imaginary part.
pub fn eigenvalues_with(m: &CMatrix, tol: &Tolerances) -> Result<Vec<C64>> {
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::Dimension(format!("eigenvalues of {}x{} matrix", m.rows(), m.cols())));
    }
    let (mut h, _) = hessenberg(m, false);
    hqr(&mut h, None, tol)?;
    let mut ev: Vec<C64> = (0..h.rows()).map(|i| h[(i, i)]).collect();
    sort_spectrum(&mut ev);
    Ok(ev)
}

pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    eigenvalues_with(m, &Tolerances::default())
}

/// Swap the adjacent diagonal entries `k`, `k+1` of a Schur form in place.
fn swap_adjacent(s: &mut SchurDecomposition, k: usize) {
    let n = s.t.rows();
    let a = s.t[(k, k)];
    let b = s.t[(k + 1, k + 1)];
    let t12 = s.t[(k, k + 1)];
    // Eigenvector of the 2x2 block for `b` is (t12, b - a).
    let g = Givens::zeroing(t12, b - a);
    g.apply_rows(&mut s.t, k, k..n);
    g.apply_cols(&mut s.t, k, 0..k + 2);
    g.apply_cols(&mut s.q, k, 0..n);
    s.t[(k + 1, k)] = C64::new(0.0, 0.0);
    s.t[(k, k)] = b;
    s.t[(k + 1, k + 1)] = a;
    s.eigenvalues.swap(k, k + 1);
}

/// Reorder so that eigenvalues selected by `keep` lead the diagonal.
/// Returns the number selected.
pub fn reorder_schur(s: &mut SchurDecomposition, keep: &[bool]) -> usize {
    let mut flags = keep.to_vec();
    let mut next = 0;
    for j in 0..flags.len() {
        if flags[j] {
            let mut pos = j;
            while pos > next {
                swap_adjacent(s, pos - 1);
                flags.swap(pos - 1, pos);
                pos -= 1;
            }
            next += 1;
        }
    }
    next
}

/// Orthonormal basis of the sum of generalized eigenspaces whose eigenvalues lie in `region`.
pub fn invariant_subspace_with(m: &CMatrix, region: &dyn SpectralRegion, tol: &Tolerances) -> Result<CMatrix> {
    let mut s = schur_with(m, tol)?;
    for &z in &s.eigenvalues {
        if region.boundary_distance(z) < tol.cut_clearance {
            return Err(Error::AmbiguousCut { re: z.re, im: z.im, clearance: tol.cut_clearance });
        }
    }
    let keep: Vec<bool> = s.eigenvalues.iter().map(|&z| region.contains(z)).collect();
    let k = reorder_schur(&mut s, &keep);
    Ok(s.q.columns(0..k))
}

pub fn invariant_subspace(m: &CMatrix, region: &dyn SpectralRegion) -> Result<CMatrix> {
    invariant_subspace_with(m, region, &Tolerances::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::matrix::c;

    #[test]
    fn triangular_spectrum() {
        let m = CMatrix::diag(&[c(2.0, 1.0), c(1.0, 0.0)]);
        let ev = eigenvalues(&m).unwrap();
        assert!((ev[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((ev[1] - c(2.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn companion_of_factored_quadratic() {
        // z^2 - 3z + 2 = (z-1)(z-2)
        let m = CMatrix::from_real(2, 2, &[0.0, -2.0, 1.0, 3.0]).unwrap();
        let ev = eigenvalues(&m).unwrap();
        assert!((ev[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((ev[1] - c(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn one_by_one() {
        let m = CMatrix::from_vec(1, 1, vec![c(0.5, -2.0)]).unwrap();
        assert_eq!(eigenvalues(&m).unwrap(), vec![c(0.5, -2.0)]);
    }

    #[test]
    fn disk_subspace_of_diagonal() {
        let m = CMatrix::diag(&[c(5.0, 0.0), c(0.1, 0.0)]);
        let v = invariant_subspace(&m, &Disk { radius: 1.0 }).unwrap();
        assert_eq!(v.cols(), 1);
        assert!(v[(0, 0)].norm() < 1e-14);
        assert!((v[(1, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jordan_block_is_one_generalized_eigenspace() {
        let m = CMatrix::from_real(2, 2, &[0.5, 1.0, 0.0, 0.5]).unwrap();
        let v = invariant_subspace(&m, &Disk { radius: 1.0 }).unwrap();
        assert_eq!(v.cols(), 2);
    }

    #[test]
    fn eigenvalue_on_cut_is_ambiguous() {
        let m = CMatrix::diag(&[c(1.0, 0.0), c(3.0, 0.0)]);
        let err = invariant_subspace(&m, &Disk { radius: 1.0 }).unwrap_err();
        assert!(matches!(err, Error::AmbiguousCut { .. }));
    }
}
