//! Structured singular value decompositions of idempotent and involutory
//! matrices.
//!
//! An idempotent matrix (`M^2 = M`, a projector) has singular values that
//! are either zero, one, or greater than one, and the split is exact:
//! besides `n - rank(M)` zeros there are `t = rank(M) - dim null(I - M M^H)`
//! values above one and `rank(M) - t` values equal to one. The values above
//! one are the reciprocal cosines of the principal angles between
//! `range(M)` and `range(M^H)`, and the left and right singular vectors
//! are coupled by a real orthogonal factor. Involutory matrices
//! (`B^2 = I`) inherit a reciprocal-pair structure `(sigma, 1/sigma)`
//! through `B = +/-(2M - I)`.
//!
//! The crate computes these decompositions constructively and
//! cross-checks them against an independent one-sided Jacobi SVD:
//!
//! - [`matrix`]: dense complex matrices, permutations, the text format
//!   lives in [`textio`].
//! - [`kernels`]: pivoted QR, Hermitian Jacobi eigensolver, oracle SVD,
//!   completion and null-space bases.
//! - [`idempotent`]: census, structured SVD, canonical form, Schur
//!   vectors, coupling matrix, principal angles.
//! - [`involutory`]: reciprocal-pair SVD with the signed-permutation
//!   relation between left and right singular vectors.
//! - [`generators`]: seeded synthesis of test matrices with known truth.
//! - [`report`] and [`cli`]: the command-line front end (`generate`,
//!   `analyze`, `verify`).
//!
//! Start with the runnable examples (`cargo run --example structured_svd`)
//! for a tour of the main capabilities.

pub mod cli;
pub mod error;
pub mod generators;
pub mod idempotent;
pub mod involutory;
pub mod kernels;
pub mod matrix;
pub mod report;
pub mod textio;

pub use error::{Error, Result};
pub use generators::{haar_unitary, idempotent_from_spec, involutory_from_spec, GeneratorSpec};
pub use idempotent::{
    analyze_idempotent, canonical_form, count_profile, coupling_matrix, principal_angles,
    structured_svd_idempotent, validate_idempotent, AngleSpectrum, CanonicalForm, CountProfile,
    CouplingMatrix, ProjectorAnalysis, StructuredSVD, Tolerances,
};
pub use involutory::{
    idempotent_from_involutory, involutory_svd, pairing_check, tn_relation_check, validate_involutory,
    InvolutorySVD, PairReport, Sign, TnStructure,
};
pub use kernels::{
    hermitian_eig, nullspace_basis, orthonormal_completion, qr_column_pivoted, svd_oracle,
    HermitianEig, OracleSVD, PivotedQR,
};
pub use matrix::{apply_permutation, Matrix, PermSide, Permutation, Scalar};
