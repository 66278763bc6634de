//! Self-contained dense factorization primitives.
//!
//! Everything here is written against [`crate::matrix::Matrix`] directly:
//! Householder QR with classical column pivoting, a cyclic Jacobi
//! eigensolver for Hermitian matrices, a one-sided Jacobi SVD used as the
//! independent oracle for all structured results, and orthonormal
//! basis/completion helpers built on top of them.

mod basis;
mod eig;
mod qr;
mod svd;

pub use basis::{nullspace_basis, orthonormal_completion};
pub use eig::{hermitian_eig, HermitianEig};
pub use qr::{householder_qr, qr_column_pivoted, PivotedQR};
pub use svd::{svd_oracle, OracleSVD};
