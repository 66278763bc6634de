//! Householder QR, plain and with classical column pivoting.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, PermSide, Permutation, Scalar};

/// Column-pivoted QR of a square matrix, arranged symmetrically.
///
/// The permutation is chosen by classical column pivoting on the input
/// itself; the factorization returned is of the *symmetrically* permuted
/// matrix, so that `q * [r1; 0]` reconstructs `P^T A P`. Symmetric
/// permutation preserves idempotency, which the structured pipelines rely
/// on.
#[derive(Debug, Clone)]
pub struct PivotedQR {
    /// Unitary factor, `n x n`.
    pub q: Matrix,
    /// Leading `rank` rows of the triangular factor (upper trapezoidal,
    /// real non-negative diagonal).
    pub r1: Matrix,
    /// Pivot permutation.
    pub perm: Permutation,
    /// Numerical rank: number of diagonal moduli above the rank tolerance.
    pub rank: usize,
    /// Whether the leading diagonal moduli came out non-increasing.
    /// Column pivoting guarantees this in exact arithmetic; rounding can
    /// produce tiny violations, recorded here as a warning flag.
    pub diag_monotone: bool,
}

fn zero() -> Scalar {
    Complex64::new(0.0, 0.0)
}

/// One Householder reflector determined by the subcolumn `work[k.., k]`,
/// applied to the trailing columns of `work` and accumulated into `q`
/// from the right.
fn reflect_column(work: &mut Matrix, q: &mut Matrix, k: usize) {
    let m = work.rows();
    let n = work.cols();
    let mut norm_sq = 0.0;
    for i in k..m {
        norm_sq += work[(i, k)].norm_sqr();
    }
    if norm_sq == 0.0 {
        return;
    }
    let norm = norm_sq.sqrt();
    let x0 = work[(k, k)];
    let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };

    // v = x + phase * ||x|| * e_1 avoids cancellation in the pivot entry.
    let mut v = vec![zero(); m - k];
    v[0] = x0 + phase * norm;
    for i in (k + 1)..m {
        v[i - k] = work[(i, k)];
    }
    let vnorm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if vnorm_sq == 0.0 {
        return;
    }
    let tau = 2.0 / vnorm_sq;

    // work <- H work on columns k..n
    for j in k..n {
        let mut w = zero();
        for i in k..m {
            w += v[i - k].conj() * work[(i, j)];
        }
        let w = w * tau;
        for i in k..m {
            let upd = w * v[i - k];
            work[(i, j)] -= upd;
        }
    }
    // Clean the annihilated subcolumn.
    work[(k, k)] = -phase * norm;
    for i in (k + 1)..m {
        work[(i, k)] = zero();
    }

    // q <- q H (H is Hermitian, so accumulating on the right builds
    // q = H_0 H_1 ... with work = q^H a).
    for i in 0..m {
        let mut w = zero();
        for l in k..m {
            w += q[(i, l)] * v[l - k];
        }
        let w = w * tau;
        for l in k..m {
            let upd = w * v[l - k].conj();
            q[(i, l)] -= upd;
        }
    }
}

/// Rescales so the diagonal of R is real and non-negative, absorbing the
/// unit phases into the columns of Q. Leaves the product Q R unchanged.
fn normalize_diagonal_phases(q: &mut Matrix, r: &mut Matrix) {
    let steps = r.rows().min(r.cols());
    for k in 0..steps {
        let d = r[(k, k)];
        let modulus = d.norm();
        if modulus == 0.0 {
            r[(k, k)] = zero();
            continue;
        }
        let phase = d / modulus;
        let inv = phase.conj();
        for j in k..r.cols() {
            let val = r[(k, j)] * inv;
            r[(k, j)] = val;
        }
        r[(k, k)] = Complex64::new(modulus, 0.0);
        for i in 0..q.rows() {
            let val = q[(i, k)] * phase;
            q[(i, k)] = val;
        }
    }
}

/// Unpivoted Householder QR of an `m x n` matrix with `m >= n`.
///
/// Returns `(q, r)` with `q` an `m x m` unitary, `r` upper triangular
/// (trapezoidal) with real non-negative diagonal, and `q r = a`.
pub fn householder_qr(a: &Matrix) -> (Matrix, Matrix) {
    let m = a.rows();
    let n = a.cols();
    let mut work = a.clone();
    let mut q = Matrix::identity(m);
    for k in 0..n.min(m) {
        reflect_column(&mut work, &mut q, k);
    }
    // Zero out strictly-lower entries left behind by skipped reflectors.
    for i in 0..m {
        for j in 0..n.min(i) {
            work[(i, j)] = zero();
        }
    }
    normalize_diagonal_phases(&mut q, &mut work);
    (q, work)
}

/// Rank-revealing QR with classical column pivoting, returned in the
/// symmetric arrangement `q * [r1; 0] = P^T a P`.
///
/// `rank_tol` defaults to `n * macheps * |r_11|`; the numerical rank is
/// the number of diagonal moduli strictly above it (zero for the zero
/// matrix).
pub fn qr_column_pivoted(a: &Matrix, rank_tol: Option<f64>) -> Result<PivotedQR> {
    if !a.is_square() {
        return Err(Error::Shape {
            op: "qr_column_pivoted",
            details: format!("{}x{} input, square required", a.rows(), a.cols()),
        });
    }
    let n = a.rows();
    let mut work = a.clone();
    let mut q = Matrix::identity(n);
    let mut perm = Permutation::identity(n);

    for k in 0..n {
        // Classical pivot: trailing column of largest norm, first on ties.
        // Norms are recomputed rather than downdated; at the sizes in
        // scope the extra O(n^3) is irrelevant next to robustness.
        let mut best = k;
        let mut best_norm = 0.0;
        for j in k..n {
            let mut nj = 0.0;
            for i in k..n {
                nj += work[(i, j)].norm_sqr();
            }
            if nj > best_norm {
                best_norm = nj;
                best = j;
            }
        }
        if best_norm == 0.0 {
            break;
        }
        if best != k {
            for i in 0..n {
                let tmp = work[(i, k)];
                work[(i, k)] = work[(i, best)];
                work[(i, best)] = tmp;
            }
            perm.swap(k, best);
        }
        reflect_column(&mut work, &mut q, k);
    }
    for i in 0..n {
        for j in 0..i {
            work[(i, j)] = zero();
        }
    }
    normalize_diagonal_phases(&mut q, &mut work);

    let r11 = work[(0, 0)].norm();
    let tol = rank_tol.unwrap_or(n as f64 * f64::EPSILON * r11);
    let rank = (0..n).filter(|&j| work[(j, j)].norm() > tol).count();

    let mut diag_monotone = true;
    for j in 0..rank.saturating_sub(1) {
        if work[(j + 1, j + 1)].norm() > work[(j, j)].norm() * (1.0 + 1e-12) {
            diag_monotone = false;
        }
    }

    // Column pivoting factored a P = Q' R; rearrange to P^T a P = (P^T Q') R.
    let q_sym = perm.apply(&q, PermSide::Rows)?;
    let r1 = work.row_block(0, rank);

    Ok(PivotedQR {
        q: q_sym,
        r1,
        perm,
        rank,
        diag_monotone,
    })
}

impl PivotedQR {
    /// `q` columns spanning the range of the permuted input (`Q_1`).
    pub fn q1(&self) -> Matrix {
        self.q.column_block(0, self.rank)
    }

    /// Remaining `q` columns (`Q_2`), spanning the orthogonal complement.
    pub fn q2(&self) -> Matrix {
        self.q.column_block(self.rank, self.q.cols())
    }

    /// Reconstruction residual `||q [r1; 0] - P^T a P||_F`.
    pub fn reconstruction_residual(&self, a: &Matrix) -> Result<f64> {
        let n = self.q.rows();
        let mut r_full = Matrix::zeros(n, n);
        for i in 0..self.r1.rows() {
            for j in 0..n {
                r_full[(i, j)] = self.r1[(i, j)];
            }
        }
        let rebuilt = self.q.matmul(&r_full)?;
        let target = self.perm.apply(a, PermSide::Symmetric)?;
        Ok(rebuilt.sub(&target)?.frobenius_norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Scalar;

    #[test]
    fn identity_has_full_rank_unit_diagonal() {
        let qr = qr_column_pivoted(&Matrix::identity(3), None).unwrap();
        assert_eq!(qr.rank, 3);
        for j in 0..3 {
            assert!((qr.r1[(j, j)].norm() - 1.0).abs() < 1e-14);
        }
        assert!(qr.diag_monotone);
    }

    #[test]
    fn zero_matrix_has_rank_zero_empty_r1() {
        let qr = qr_column_pivoted(&Matrix::zeros(3, 3), None).unwrap();
        assert_eq!(qr.rank, 0);
        assert_eq!(qr.r1.rows(), 0);
        assert_eq!(qr.r1.cols(), 3);
        assert!(qr.q.orthonormality_defect() < 1e-13);
    }

    #[test]
    fn oblique_projector_2x2() {
        // Both columns of [[1,1],[0,0]] have unit norm, so the tie keeps
        // the first column and the pivot permutation is the identity.
        // Hand QR of the unpermuted matrix: Q = I, R = [[1,1],[0,0]].
        let m = Matrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]);
        let qr = qr_column_pivoted(&m, None).unwrap();
        assert_eq!(qr.rank, 1);
        assert!(qr.perm.is_identity());
        assert!((qr.r1[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!((qr.r1[(0, 1)] - Scalar::new(1.0, 0.0)).norm() < 1e-14);
        assert!(qr.reconstruction_residual(&m).unwrap() < 1e-14);
    }

    #[test]
    fn non_square_rejected() {
        let a = Matrix::zeros(2, 3);
        assert!(matches!(qr_column_pivoted(&a, None), Err(Error::Shape { .. })));
    }

    #[test]
    fn pivot_moves_dominant_column_first() {
        let a = Matrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 5.0]]);
        let qr = qr_column_pivoted(&a, None).unwrap();
        assert_eq!(qr.perm.map(), &[1, 0]);
        assert!((qr.r1[(0, 0)].norm() - 5.0).abs() < 1e-12);
        assert!(qr.reconstruction_residual(&a).unwrap() < 1e-12);
    }

    #[test]
    fn reconstructs_random_complex_input() {
        // Fixed pseudo-random complex matrix; residual bound from the
        // module contract.
        let n = 8;
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let a = Matrix::from_fn(n, n, |_, _| Scalar::new(next(), next()));
        let qr = qr_column_pivoted(&a, None).unwrap();
        let res = qr.reconstruction_residual(&a).unwrap();
        assert!(res <= 1e-12 * n as f64 * a.frobenius_norm(), "residual {res:.3e}");
        assert!(qr.q.orthonormality_defect() <= 100.0 * n as f64 * f64::EPSILON);
    }

    #[test]
    fn left_inverse_identity_for_idempotent_inputs() {
        // For idempotent a the factorization satisfies R1 Q1 = I_r.
        use crate::generators::{idempotent_from_spec, GeneratorSpec};
        for seed in [1u64, 2, 3] {
            let spec = GeneratorSpec::new(9, 4, 2, vec![1.1, 0.6], seed).unwrap();
            let (m, _, _) = idempotent_from_spec(&spec).unwrap();
            let qr = qr_column_pivoted(&m, None).unwrap();
            let rq = qr.r1.matmul(&qr.q1()).unwrap();
            let residual = rq.sub(&Matrix::identity(qr.rank)).unwrap().frobenius_norm();
            assert!(residual <= 1e-10 * 9.0, "residual {residual:.3e}");
        }
    }

    #[test]
    fn householder_qr_completes_rectangular() {
        let a = Matrix::from_real_rows(&[&[1.0], &[1.0], &[1.0]]);
        let (q, r) = householder_qr(&a);
        assert!(q.orthonormality_defect() < 1e-13);
        assert!((r[(0, 0)].re - 3f64.sqrt()).abs() < 1e-13);
        let rebuilt = q.matmul(&r).unwrap();
        assert!(rebuilt.sub(&a).unwrap().frobenius_norm() < 1e-13);
    }
}
