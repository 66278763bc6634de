use thiserror::Error;

/// Errors produced by the matrix kernels and the structured decompositions.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand dimensions do not fit the operation.
    #[error("shape mismatch in {op}: {details}")]
    Shape { op: &'static str, details: String },

    /// A matrix entry is NaN or infinite.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// An index sequence is not a bijection on 0..n.
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    /// Input fails a mathematical precondition (not idempotent, not
    /// Hermitian, columns not orthonormal, ...).
    #[error("domain error in {op}: {details} (residual {residual:.3e}, tolerance {tol:.3e})")]
    Domain {
        op: &'static str,
        details: &'static str,
        residual: f64,
        tol: f64,
    },

    /// The two independent census routes disagree on the number of
    /// singular values greater than one.
    #[error("census mismatch: threshold count gives t = {threshold_t}, rank/null formula gives t = {rank_null_t}")]
    CensusMismatch { threshold_t: usize, rank_null_t: usize },

    /// A residual that the algorithm guarantees by construction exceeded
    /// its tolerance; indicates a defective input or a bug.
    #[error("diagnostic failure in {op}: {check} residual {residual:.3e} exceeds {tol:.3e}")]
    Diagnostic {
        op: &'static str,
        check: &'static str,
        residual: f64,
        tol: f64,
    },

    /// An iterative kernel did not reach its target within the sweep cap.
    #[error("{op} did not converge: off-diagonal {residual:.3e} after {sweeps} sweeps (target {tol:.3e})")]
    Convergence {
        op: &'static str,
        residual: f64,
        tol: f64,
        sweeps: usize,
    },

    /// A generator prescription violates its own constraints.
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    /// Malformed text input (matrix file, spec string, sweep string).
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
