//! Orthonormal completion and numerical null-space bases.

use crate::error::{Error, Result};
use crate::kernels::qr::householder_qr;
use crate::kernels::svd::svd_oracle;
use crate::matrix::Matrix;

/// Completes `n x k` orthonormal columns to an `n x n` unitary, returning
/// the `n x (n - k)` complement block.
///
/// Deterministic: Householder QR of the input supplies the complement,
/// and each complement column is rescaled so its largest-modulus entry is
/// real positive. For `k = 0` the identity is returned.
pub fn orthonormal_completion(cols: &Matrix) -> Result<Matrix> {
    let n = cols.rows();
    let k = cols.cols();
    if k > n {
        return Err(Error::Shape {
            op: "orthonormal_completion",
            details: format!("{}x{} has more columns than rows", n, k),
        });
    }
    let defect = cols.orthonormality_defect();
    let tol = 1e-10 * (k as f64).sqrt().max(1.0);
    if defect > tol {
        return Err(Error::Domain {
            op: "orthonormal_completion",
            details: "input columns are not orthonormal",
            residual: defect,
            tol,
        });
    }
    if k == 0 {
        return Ok(Matrix::identity(n));
    }
    if k == n {
        return Ok(Matrix::zeros(n, 0));
    }

    let (q, _r) = householder_qr(cols);
    let mut completion = q.column_block(k, n);
    for j in 0..completion.cols() {
        // Make the first entry carrying at least half the peak modulus
        // real positive; the half threshold keeps the pivot choice stable
        // under last-ulp noise among near-equal entries.
        let peak = (0..n).map(|i| completion[(i, j)].norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            continue;
        }
        let pivot = (0..n)
            .find(|&i| completion[(i, j)].norm() >= 0.5 * peak)
            .expect("peak entry exists");
        let entry = completion[(pivot, j)];
        let inv = (entry / entry.norm()).conj();
        for i in 0..n {
            let val = completion[(i, j)] * inv;
            completion[(i, j)] = val;
        }
    }
    Ok(completion)
}

/// Orthonormal basis of the numerical null space of a square matrix.
///
/// The basis columns are the right singular vectors whose singular values
/// fall at or below the threshold, which defaults to `n * macheps * sigma_1`.
pub fn nullspace_basis(a: &Matrix, tol: Option<f64>) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::Shape {
            op: "nullspace_basis",
            details: format!("{}x{} input, square required", a.rows(), a.cols()),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let svd = svd_oracle(a);
    let sigma1 = svd.sigma.first().copied().unwrap_or(0.0);
    let threshold = tol.unwrap_or(n as f64 * f64::EPSILON * sigma1);
    let width = svd.sigma.iter().filter(|&&s| s <= threshold).count();
    Ok(svd.v.column_block(n - width, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn completes_first_basis_vector() {
        let e1 = Matrix::from_real_rows(&[&[1.0], &[0.0]]);
        let comp = orthonormal_completion(&e1).unwrap();
        assert_eq!(comp.cols(), 1);
        // +/- e2 up to phase; combined matrix unitary.
        assert!(comp[(0, 0)].norm() < 1e-14);
        assert!((comp[(1, 0)].norm() - 1.0).abs() < 1e-14);
        let full = e1.hcat(&comp).unwrap();
        assert!(full.orthonormality_defect() < 1e-13);
    }

    #[test]
    fn empty_input_returns_identity() {
        let cols = Matrix::zeros(3, 0);
        let comp = orthonormal_completion(&cols).unwrap();
        assert_eq!(comp, Matrix::identity(3));
    }

    #[test]
    fn completes_diagonal_direction() {
        let inv_sqrt2 = 1.0 / 2f64.sqrt();
        let cols = Matrix::from_real_rows(&[&[inv_sqrt2], &[inv_sqrt2]]);
        let comp = orthonormal_completion(&cols).unwrap();
        // Complement of span{(1,1)} is span{(1,-1)}.
        let overlap = comp[(0, 0)].conj() * inv_sqrt2 - comp[(1, 0)].conj() * inv_sqrt2;
        assert!((overlap.norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_orthonormal() {
        let cols = Matrix::from_real_rows(&[&[1.0], &[1.0]]);
        assert!(matches!(orthonormal_completion(&cols), Err(Error::Domain { .. })));
    }

    #[test]
    fn full_set_gives_empty_completion() {
        let comp = orthonormal_completion(&Matrix::identity(2)).unwrap();
        assert_eq!(comp.rows(), 2);
        assert_eq!(comp.cols(), 0);
    }

    #[test]
    fn nullspace_of_identity_is_empty() {
        let basis = nullspace_basis(&Matrix::identity(2), None).unwrap();
        assert_eq!(basis.cols(), 0);
    }

    #[test]
    fn nullspace_of_zero_is_everything() {
        let basis = nullspace_basis(&Matrix::zeros(2, 2), None).unwrap();
        assert_eq!(basis.cols(), 2);
        assert!(basis.orthonormality_defect() < 1e-14);
    }

    #[test]
    fn gram_gap_of_oblique_projector_is_nonsingular() {
        // I - M M^H = diag(-1, 1) for M = [[1,1],[0,0]]: trivial null space.
        let m = Matrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]);
        let gap = Matrix::identity(2).sub(&m.matmul(&m.adjoint()).unwrap()).unwrap();
        let basis = nullspace_basis(&gap, None).unwrap();
        assert_eq!(basis.cols(), 0);
    }

    #[test]
    fn completion_deterministic_sign_convention() {
        // The largest-modulus entry of each completion column is real
        // positive; two calls agree bitwise.
        let inv_sqrt2 = 1.0 / 2f64.sqrt();
        let cols = Matrix::from_real_rows(&[&[inv_sqrt2], &[inv_sqrt2]]);
        let a = orthonormal_completion(&cols).unwrap();
        let b = orthonormal_completion(&cols).unwrap();
        assert_eq!(a, b);
        assert!(a[(0, 0)].re > 0.0);
        assert!(a[(0, 0)].im.abs() < 1e-15);
        assert!((a[(0, 0)].re - inv_sqrt2).abs() < 1e-14);
    }
}
