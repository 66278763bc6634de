//! Structured SVD of idempotent matrices (projectors).
//!
//! For an idempotent `M` of rank `r` the singular values split into three
//! exact classes: `t` values greater than one, `r - t` values equal to
//! one, and `n - r` zeros, where `t = rank(M) - dim null(I - M M^H)`.
//! The values above one are the secants of the principal angles between
//! `range(M)` and `range(M^H)`, and the left and right singular vectors
//! are coupled through a real orthogonal matrix `O`. This module computes
//! all of it constructively: the census, the angle spectrum, the
//! condensed real form `N` together with its Schur unitary, and the
//! coupling matrix.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{hermitian_eig, qr_column_pivoted, svd_oracle};
use crate::matrix::{Matrix, PermSide, Scalar};

/// Default relative gate for accepting a matrix as idempotent.
pub const DEFAULT_IDEMPOTENCY_TOL: f64 = 1e-10;

/// Default relative gate for accepting a matrix as involutory.
pub const DEFAULT_INVOLUTION_TOL: f64 = 1e-10;

/// Default angle separation below which coupling-pattern assertions are
/// suspended (coupling blocks may legitimately mix for clustered angles).
pub const DEFAULT_ANGLE_SEP: f64 = 1e-6;

/// Tolerance bundle for the structured pipelines.
///
/// `None` fields fall back to the scale-aware defaults documented on each
/// field; every one of them is overridable from the CLI.
#[derive(Debug, Clone)]
pub struct Tolerances {
    /// Relative idempotency gate (`||M^2 - M|| / max(1, ||M||)`).
    pub idem: f64,
    /// Relative involution gate (`||B^2 - I|| / max(1, ||B||)`).
    pub invol: f64,
    /// Rank tolerance for pivoted QR; default `n * macheps * |r_11|`.
    pub rank: Option<f64>,
    /// Threshold separating the greater-than-one and equal-to-one
    /// singular value classes; default `max(1e-8, 50 n macheps)`.
    pub count: Option<f64>,
    /// Threshold for the zero class; default `n * macheps * sigma_1`.
    pub zero: Option<f64>,
    /// Null-space threshold used by the census and joint-kernel steps;
    /// default `n * macheps * sigma_1` of the matrix whose null space is
    /// being computed.
    pub null: Option<f64>,
    /// Minimal pairwise angle gap for coupling-pattern assertions.
    pub angle_sep: f64,
    /// Residual gate scale: `tol_rec = rec * max(1, ||M||_F)`.
    pub rec: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            idem: DEFAULT_IDEMPOTENCY_TOL,
            invol: DEFAULT_INVOLUTION_TOL,
            rank: None,
            count: None,
            zero: None,
            null: None,
            angle_sep: DEFAULT_ANGLE_SEP,
            rec: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn count_tol(&self, n: usize) -> f64 {
        self.count.unwrap_or((50.0 * n as f64 * f64::EPSILON).max(1e-8))
    }

    pub fn zero_tol(&self, n: usize, sigma1: f64) -> f64 {
        self.zero.unwrap_or(n as f64 * f64::EPSILON * sigma1)
    }

    pub fn rec_tol(&self, norm: f64) -> f64 {
        self.rec * norm.max(1.0)
    }
}

/// The singular value census of an idempotent matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountProfile {
    pub n: usize,
    /// rank
    pub r: usize,
    /// co-rank, `n - r`
    pub s: usize,
    /// number of singular values greater than one
    pub t: usize,
    /// `min(r, s)`
    pub nu: usize,
}

impl CountProfile {
    pub fn new(n: usize, r: usize, t: usize) -> Result<Self> {
        if r > n {
            return Err(Error::InvalidSpec(format!("rank {} exceeds order {}", r, n)));
        }
        let s = n - r;
        let nu = r.min(s);
        if t > nu {
            return Err(Error::InvalidSpec(format!("t = {} exceeds min(r, s) = {}", t, nu)));
        }
        Ok(CountProfile { n, r, s, t, nu })
    }
}

/// Principal angles `psi_1 >= ... >= psi_t > 0 = psi_{t+1} = ... = psi_r`,
/// in radians, strictly below pi/2.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSpectrum {
    psi: Vec<f64>,
}

impl AngleSpectrum {
    pub fn new(psi: Vec<f64>) -> Result<Self> {
        for w in psi.windows(2) {
            if w[1] > w[0] {
                return Err(Error::InvalidSpec(format!("angles not non-increasing: {:?}", psi)));
            }
        }
        if psi.iter().any(|&p| !(0.0..FRAC_PI_2).contains(&p)) {
            return Err(Error::InvalidSpec(format!("angles outside [0, pi/2): {:?}", psi)));
        }
        Ok(AngleSpectrum { psi })
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    /// Number of strictly positive angles.
    pub fn count_positive(&self) -> usize {
        self.psi.iter().filter(|&&p| p > 0.0).count()
    }
}

/// Structured SVD `M = U diag(sigma) V^H` with census and angle spectrum.
#[derive(Debug, Clone)]
pub struct StructuredSVD {
    pub u: Matrix,
    /// Non-increasing, non-negative; exactly `counts.t` entries above one,
    /// `counts.r - counts.t` equal to one, `counts.s` zeros.
    pub sigma: Vec<f64>,
    pub v: Matrix,
    pub counts: CountProfile,
    pub angles: AngleSpectrum,
}

/// The real condensed form `N` and a Schur unitary with `M = U N U^H`.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    /// Real `n x n` matrix: identity blocks plus the tangent coupling
    /// block `T = diag(tan psi_1, ..., tan psi_t)` in the top-right corner.
    pub n_matrix: Matrix,
    /// Unitary with `M * schur_u = schur_u * n_matrix`.
    pub schur_u: Matrix,
    /// `tan psi_j = sqrt(sigma_j^2 - 1)`, length `t`, non-increasing.
    pub tau: Vec<f64>,
}

/// The real orthogonal coupling factor `O = schur_u^H V` together with the
/// recovered sign matrix `E`.
#[derive(Debug, Clone)]
pub struct CouplingMatrix {
    pub o: Matrix,
    /// Diagonal of `E`, entries +/-1, length `t`.
    pub signs: Vec<f64>,
    /// True when angle clusters are closer than the separation threshold;
    /// the pattern assertion is skipped in that case.
    pub degenerate: bool,
    /// Max entrywise deviation from the block pattern
    /// `[C, 0, E S; 0, I, 0; S, 0, -E C]`; `None` when skipped.
    pub pattern_residual: Option<f64>,
}

/// Everything the pipeline produces in one pass.
#[derive(Debug, Clone)]
pub struct ProjectorAnalysis {
    pub idempotency_residual: f64,
    pub ssvd: StructuredSVD,
    pub canonical: CanonicalForm,
    pub coupling: CouplingMatrix,
    /// The off-diagonal block `X = R_1 Q_2` of the similarity-transformed
    /// input; its nonzero singular values equal the tangents in `tau`.
    pub x_block: Matrix,
    pub reconstruction_residual: f64,
    pub schur_residual: f64,
}

/// Relative idempotency residual `||m^2 - m||_F / max(1, ||m||_F)`.
///
/// The caller-facing predicate is `residual <= tol` with
/// [`DEFAULT_IDEMPOTENCY_TOL`] as the usual gate.
pub fn validate_idempotent(m: &Matrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::Shape {
            op: "validate_idempotent",
            details: format!("{}x{} input, square required", m.rows(), m.cols()),
        });
    }
    let m2 = m.matmul(m)?;
    Ok(m2.sub(m)?.frobenius_norm() / m.frobenius_norm().max(1.0))
}

fn ensure_idempotent(m: &Matrix, tol: &Tolerances) -> Result<f64> {
    let residual = validate_idempotent(m)?;
    if residual > tol.idem {
        return Err(Error::Domain {
            op: "idempotent",
            details: "matrix is not idempotent",
            residual,
            tol: tol.idem,
        });
    }
    Ok(residual)
}

/// The condensed real matrix of the canonical form: identity of order `r`
/// in the leading diagonal, `tan psi_j` coupling the first `t` rows to the
/// last `t` columns, zeros elsewhere.
pub fn condensed_matrix(n: usize, r: usize, t: usize, psi: &[f64]) -> Matrix {
    assert!(t <= r.min(n - r) && psi.len() >= t);
    let mut out = Matrix::zeros(n, n);
    for j in 0..r {
        out[(j, j)] = Scalar::new(1.0, 0.0);
    }
    for j in 0..t {
        out[(j, n - t + j)] = Scalar::new(psi[j].tan(), 0.0);
    }
    out
}

/// Census of an idempotent matrix via two independent routes: the rank of
/// a pivoted QR and the dimension of `null(I - M M^H)`.
pub fn count_profile(m: &Matrix) -> Result<CountProfile> {
    count_profile_with(m, &Tolerances::default())
}

pub fn count_profile_with(m: &Matrix, tol: &Tolerances) -> Result<CountProfile> {
    ensure_idempotent(m, tol)?;
    let qr = qr_column_pivoted(m, tol.rank)?;
    census_from_rank(m, qr.rank, tol)
}

/// Null-space threshold for the Gram-derived census matrices. On top of
/// the relative `n eps sigma_1` term, an additive `50 n eps` floor covers
/// the formation noise of `I - M M^H` and `M^H M + M M^H`, whose natural
/// scale stays near one even when the matrix itself is tiny.
fn gram_null_threshold(n: usize, sigma1: f64) -> f64 {
    n as f64 * f64::EPSILON * (sigma1 + 50.0)
}

fn census_from_rank(m: &Matrix, r: usize, tol: &Tolerances) -> Result<CountProfile> {
    let n = m.rows();
    let gap = Matrix::identity(n).sub(&m.matmul(&m.adjoint())?)?;
    let gap_svd = svd_oracle(&gap);
    let threshold = tol
        .null
        .unwrap_or_else(|| gram_null_threshold(n, gap_svd.sigma.first().copied().unwrap_or(0.0)));
    let null_dim = gap_svd.sigma.iter().filter(|&&s| s <= threshold).count();
    if null_dim > r {
        return Err(Error::Diagnostic {
            op: "count_profile",
            check: "dim null(I - M M^H) exceeds rank",
            residual: null_dim as f64,
            tol: r as f64,
        });
    }
    CountProfile::new(n, r, r - null_dim)
}

/// Structured SVD of an idempotent matrix; see [`analyze_idempotent`] for
/// the full pipeline output.
pub fn structured_svd_idempotent(m: &Matrix) -> Result<StructuredSVD> {
    Ok(analyze_idempotent(m, &Tolerances::default())?.ssvd)
}

pub fn structured_svd_idempotent_with(m: &Matrix, tol: &Tolerances) -> Result<StructuredSVD> {
    Ok(analyze_idempotent(m, tol)?.ssvd)
}

/// Canonical form `M = U N U^H` of an idempotent matrix.
pub fn canonical_form(m: &Matrix) -> Result<CanonicalForm> {
    Ok(analyze_idempotent(m, &Tolerances::default())?.canonical)
}

pub fn canonical_form_with(m: &Matrix, tol: &Tolerances) -> Result<CanonicalForm> {
    Ok(analyze_idempotent(m, tol)?.canonical)
}

fn column_dot(a: &Matrix, ja: usize, b: &Matrix, jb: usize) -> Scalar {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.rows() {
        acc += a[(i, ja)].conj() * b[(i, jb)];
    }
    acc
}

/// Runs the whole structured pipeline on one idempotent matrix.
///
/// Steps: symmetric pivoted QR, the left-inverse identity `R_1 Q_1 = I`,
/// the Gram block `X X^H + I`, its Jacobi eigendecomposition, assembly of
/// the unitary factors, the two-route census, the canonical form, and the
/// coupling matrix. Residual gates are enforced before returning.
pub fn analyze_idempotent(m: &Matrix, tol: &Tolerances) -> Result<ProjectorAnalysis> {
    let idem_residual = ensure_idempotent(m, tol)?;
    let n = m.rows();
    let m_norm = m.frobenius_norm();
    let rec_tol = tol.rec_tol(m_norm);

    let qr = qr_column_pivoted(m, tol.rank)?;
    let r = qr.rank;
    let s = n - r;

    // R_1 Q_1 = I_r, a consequence of idempotency.
    let rq = qr.r1.matmul(&qr.q1())?;
    let rq_residual = rq.sub(&Matrix::identity(r))?.frobenius_norm();
    let rq_tol = 1e-10 * (n as f64) * m_norm.max(1.0);
    if rq_residual > rq_tol {
        return Err(Error::Diagnostic {
            op: "structured_svd_idempotent",
            check: "R1 Q1 = I left-inverse identity",
            residual: rq_residual,
            tol: rq_tol,
        });
    }

    let x_block = qr.r1.matmul(&qr.q2())?;

    // X X^H + I is Hermitian positive definite; its eigenvalues are the
    // squared nonzero singular values of M.
    let gram = x_block.matmul(&x_block.adjoint())?.add(&Matrix::identity(r))?;
    let eig = hermitian_eig(&gram)?;

    let mut sigma = vec![0.0; n];
    for (slot, &value) in sigma.iter_mut().zip(&eig.values) {
        *slot = value.max(0.0).sqrt();
    }

    // U = P (Q diag(U_1, I_s)); U_2 = I_s is the cheapest valid choice.
    let mut block = Matrix::identity(n);
    for i in 0..r {
        for j in 0..r {
            block[(i, j)] = eig.vectors[(i, j)];
        }
    }
    let u = qr.perm.inverse().apply(&qr.q.matmul(&block)?, PermSide::Rows)?;

    // Census, route one: counting thresholds on sigma. The classes are
    // disjoint by construction, with the zero class taking precedence so
    // that a generously relaxed count tolerance cannot swallow zeros.
    let count_tol = tol.count_tol(n);
    let zero_tol = tol.zero_tol(n, sigma.first().copied().unwrap_or(0.0));
    let t_threshold = sigma.iter().filter(|&&x| x > 1.0 + count_tol).count();
    let zero_count = sigma.iter().filter(|&&x| x <= zero_tol).count();
    let unit_count = sigma
        .iter()
        .filter(|&&x| (x - 1.0).abs() <= count_tol && x > zero_tol)
        .count();

    // Census, route two: rank minus the null dimension of I - M M^H.
    let counts = census_from_rank(m, r, tol)?;
    if counts.t != t_threshold {
        return Err(Error::CensusMismatch {
            threshold_t: t_threshold,
            rank_null_t: counts.t,
        });
    }
    if unit_count != r - counts.t || zero_count != s || t_threshold + unit_count + zero_count != n {
        return Err(Error::Diagnostic {
            op: "structured_svd_idempotent",
            check: "singular value classes do not partition (t / unit / zero)",
            residual: (t_threshold + unit_count + zero_count) as f64,
            tol: n as f64,
        });
    }
    let t = counts.t;

    // Angle spectrum: psi_j = arccos(1 / sigma_j) for the oblique part,
    // exact zeros for the unit part.
    let mut psi = vec![0.0; r];
    for j in 0..t {
        psi[j] = (1.0 / sigma[j]).clamp(0.0, 1.0).acos();
    }
    let angles = AngleSpectrum::new(psi.clone())?;

    // V_r = M^H U_r diag(1/sigma); each column phase-fixed so that
    // u_j^H v_j is real positive, which the Schur column formula needs.
    let u_r = u.column_block(0, r);
    let mut v_r = m.adjoint().matmul(&u_r)?;
    for j in 0..r {
        let inv = Scalar::new(1.0 / sigma[j], 0.0);
        for i in 0..n {
            let val = v_r[(i, j)] * inv;
            v_r[(i, j)] = val;
        }
    }
    for j in 0..r {
        let d = column_dot(&u, j, &v_r, j);
        if d.norm() > 0.0 {
            let corr = d.conj() / d.norm();
            for i in 0..n {
                let val = v_r[(i, j)] * corr;
                v_r[(i, j)] = val;
            }
        }
    }

    // Joint kernel null(M) ∩ null(M^H) via the Gram sum M^H M + M M^H.
    let gram_sum = m.adjoint().matmul(m)?.add(&m.matmul(&m.adjoint())?)?;
    let gram_svd = svd_oracle(&gram_sum);
    let kernel_threshold = tol
        .null
        .unwrap_or_else(|| gram_null_threshold(n, gram_svd.sigma.first().copied().unwrap_or(0.0)));
    let kernel_width = gram_svd.sigma.iter().filter(|&&x| x <= kernel_threshold).count();
    let kernel = gram_svd.v.column_block(n - kernel_width, n);
    if kernel.cols() != s - t {
        return Err(Error::Diagnostic {
            op: "structured_svd_idempotent",
            check: "joint kernel dimension equals s - t",
            residual: kernel.cols() as f64,
            tol: (s - t) as f64,
        });
    }

    // Schur columns y_j = (v_j - cos psi_j u_j) / sin psi_j and the
    // complementary null directions w_j = (u_j - cos psi_j v_j) / sin psi_j.
    let mut y_cols = Matrix::zeros(n, t);
    let mut w_cols = Matrix::zeros(n, t);
    for j in 0..t {
        let c = Scalar::new(psi[j].cos(), 0.0);
        let inv_s = Scalar::new(1.0 / psi[j].sin(), 0.0);
        for i in 0..n {
            y_cols[(i, j)] = (v_r[(i, j)] - c * u[(i, j)]) * inv_s;
            w_cols[(i, j)] = (u[(i, j)] - c * v_r[(i, j)]) * inv_s;
        }
    }

    // V = [V_r | joint kernel | w]: the zero-singular-value columns are
    // chosen canonically so that V = (schur U) O holds with the block
    // pattern of O intact.
    let v = v_r.hcat(&kernel)?.hcat(&w_cols)?;

    // Schur unitary: range vectors, joint kernel, then the y columns.
    let schur_u = u_r.hcat(&kernel)?.hcat(&y_cols)?;
    let n_matrix = condensed_matrix(n, r, t, &psi);
    let tau: Vec<f64> = psi[..t].iter().map(|p| p.tan()).collect();

    let counts_full = CountProfile::new(n, r, t)?;
    let ssvd = StructuredSVD {
        u: u.clone(),
        sigma: sigma.clone(),
        v: v.clone(),
        counts: counts_full,
        angles,
    };
    let canonical = CanonicalForm {
        n_matrix: n_matrix.clone(),
        schur_u: schur_u.clone(),
        tau,
    };

    // Residual gates.
    let rebuilt = u.matmul(&Matrix::diag(&sigma))?.matmul(&v.adjoint())?;
    let reconstruction_residual = rebuilt.sub(m)?.frobenius_norm();
    if reconstruction_residual > rec_tol {
        return Err(Error::Diagnostic {
            op: "structured_svd_idempotent",
            check: "SVD reconstruction",
            residual: reconstruction_residual,
            tol: rec_tol,
        });
    }
    let schur_residual = m
        .matmul(&schur_u)?
        .sub(&schur_u.matmul(&n_matrix)?)?
        .frobenius_norm();
    if schur_residual > rec_tol {
        return Err(Error::Diagnostic {
            op: "canonical_form",
            check: "Schur similarity M U = U N",
            residual: schur_residual,
            tol: rec_tol,
        });
    }

    let coupling = coupling_matrix_with(&ssvd, &canonical, tol)?;

    Ok(ProjectorAnalysis {
        idempotency_residual: idem_residual,
        ssvd,
        canonical,
        coupling,
        x_block,
        reconstruction_residual,
        schur_residual,
    })
}

/// Expected coupling pattern `[C, 0, E S; 0, I, 0; S, 0, -E C]`.
fn coupling_pattern(n: usize, t: usize, psi: &[f64], signs: &[f64]) -> Matrix {
    let mut p = Matrix::zeros(n, n);
    for j in 0..t {
        let (sn, cs) = psi[j].sin_cos();
        p[(j, j)] = Scalar::new(cs, 0.0);
        p[(j, n - t + j)] = Scalar::new(signs[j] * sn, 0.0);
        p[(n - t + j, j)] = Scalar::new(sn, 0.0);
        p[(n - t + j, n - t + j)] = Scalar::new(-signs[j] * cs, 0.0);
    }
    for j in t..(n - t) {
        p[(j, j)] = Scalar::new(1.0, 0.0);
    }
    p
}

/// Computes the coupling matrix `O = schur_u^H V` and recovers the sign
/// matrix `E`. With all oblique angles separated by at least `angle_sep`
/// the block pattern is asserted entrywise to 1e-8; for clustered angles
/// the check is skipped and the result flagged degenerate.
pub fn coupling_matrix(ssvd: &StructuredSVD, cf: &CanonicalForm) -> Result<CouplingMatrix> {
    coupling_matrix_with(ssvd, cf, &Tolerances::default())
}

pub fn coupling_matrix_with(
    ssvd: &StructuredSVD,
    cf: &CanonicalForm,
    tol: &Tolerances,
) -> Result<CouplingMatrix> {
    let n = ssvd.counts.n;
    if cf.schur_u.rows() != n || ssvd.v.rows() != n {
        return Err(Error::Shape {
            op: "coupling_matrix",
            details: format!(
                "schur factor {}x{} against V {}x{}",
                cf.schur_u.rows(),
                cf.schur_u.cols(),
                ssvd.v.rows(),
                ssvd.v.cols()
            ),
        });
    }
    let t = ssvd.counts.t;
    let psi = &ssvd.angles.psi()[..t];
    let o = cf.schur_u.adjoint().matmul(&ssvd.v)?;

    let mut signs = vec![1.0; t];
    for j in 0..t {
        // O[j, n-t+j] = E_j sin(psi_j); psi_j > 0 for j < t by definition.
        signs[j] = if o[(j, n - t + j)].re >= 0.0 { 1.0 } else { -1.0 };
    }

    let degenerate = psi.windows(2).any(|w| w[0] - w[1] < tol.angle_sep);
    if degenerate {
        return Ok(CouplingMatrix {
            o,
            signs,
            degenerate: true,
            pattern_residual: None,
        });
    }

    let pattern = coupling_pattern(n, t, psi, &signs);
    let mut deviation = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            deviation = deviation.max((o[(i, j)] - pattern[(i, j)]).norm());
        }
    }
    // 1e-8 at the default residual scale; relaxing `rec` relaxes this
    // gate by the same factor.
    let pattern_tol = 1e-8 * (tol.rec / 1e-9);
    if deviation > pattern_tol {
        return Err(Error::Diagnostic {
            op: "coupling_matrix",
            check: "block pattern [C,0,ES; 0,I,0; S,0,-EC]",
            residual: deviation,
            tol: pattern_tol,
        });
    }
    Ok(CouplingMatrix {
        o,
        signs,
        degenerate: false,
        pattern_residual: Some(deviation),
    })
}

/// Principal angles between `range(M)` and `range(M^H)`, computed
/// independently of the structured pipeline: orthonormal bases from two
/// pivoted QRs, then angles from the singular values of the overlap
/// `P^H R`. Angles below pi/4 are taken from the sine formulation
/// `(I - P P^H) R` instead of the arccosine, which would lose half the
/// digits for small angles. Returned non-increasing, length `rank(M)`.
pub fn principal_angles(m: &Matrix) -> Result<Vec<f64>> {
    principal_angles_with(m, &Tolerances::default())
}

pub fn principal_angles_with(m: &Matrix, tol: &Tolerances) -> Result<Vec<f64>> {
    ensure_idempotent(m, tol)?;
    let qr_m = qr_column_pivoted(m, tol.rank)?;
    let qr_mh = qr_column_pivoted(&m.adjoint(), tol.rank)?;
    if qr_m.rank != qr_mh.rank {
        return Err(Error::Diagnostic {
            op: "principal_angles",
            check: "rank(M) = rank(M^H)",
            residual: qr_mh.rank as f64,
            tol: qr_m.rank as f64,
        });
    }
    let r = qr_m.rank;
    // q = P^T Q~, so un-permute the rows to get range bases of M itself.
    let p_basis = qr_m
        .perm
        .inverse()
        .apply(&qr_m.q, PermSide::Rows)?
        .column_block(0, r);
    let r_basis = qr_mh
        .perm
        .inverse()
        .apply(&qr_mh.q, PermSide::Rows)?
        .column_block(0, r);
    let overlap = p_basis.adjoint().matmul(&r_basis)?;
    let cosines = svd_oracle(&overlap).sigma;
    // Sine route: singular values of (I - P P^H) R, sorted descending,
    // pair with the angles in descending order.
    let residual_block = r_basis.sub(&p_basis.matmul(&overlap)?)?;
    let sines = svd_oracle(&residual_block).sigma;

    let mut angles = Vec::with_capacity(r);
    for k in 0..r {
        let c = cosines[r - 1 - k].clamp(0.0, 1.0);
        let s = sines[k].clamp(0.0, 1.0);
        // Large angles from the cosine, small ones from the sine.
        angles.push(if c * c <= 0.5 { c.acos() } else { s.asin() });
    }
    Ok(angles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{haar_unitary, idempotent_from_spec, GeneratorSpec};

    fn oblique() -> Matrix {
        Matrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]])
    }

    #[test]
    fn idempotency_residual_values() {
        assert_eq!(validate_idempotent(&Matrix::identity(5)).unwrap(), 0.0);
        assert_eq!(validate_idempotent(&oblique()).unwrap(), 0.0);
        // [[1,1],[0,1]] squared differs by a single unit entry.
        let shear = Matrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let res = validate_idempotent(&shear).unwrap();
        assert!((res - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!(res > DEFAULT_IDEMPOTENCY_TOL);
    }

    #[test]
    fn count_profile_examples() {
        let id3 = count_profile(&Matrix::identity(3)).unwrap();
        assert_eq!((id3.n, id3.r, id3.s, id3.t, id3.nu), (3, 3, 0, 0, 0));

        let ob = count_profile(&oblique()).unwrap();
        assert_eq!((ob.n, ob.r, ob.s, ob.t, ob.nu), (2, 1, 1, 1, 1));

        let z4 = count_profile(&Matrix::zeros(4, 4)).unwrap();
        assert_eq!((z4.n, z4.r, z4.s, z4.t, z4.nu), (4, 0, 4, 0, 0));
    }

    #[test]
    fn count_profile_rejects_non_idempotent() {
        let shear = Matrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(count_profile(&shear), Err(Error::Domain { .. })));
    }

    #[test]
    fn structured_svd_identity() {
        let ssvd = structured_svd_idempotent(&Matrix::identity(2)).unwrap();
        assert_eq!(ssvd.sigma, vec![1.0, 1.0]);
        assert_eq!(ssvd.counts.t, 0);
        assert_eq!(ssvd.angles.psi(), &[0.0, 0.0]);
        // u and v agree after phase fixing.
        assert!(ssvd.u.sub(&ssvd.v).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn structured_svd_oblique_projector() {
        let an = analyze_idempotent(&oblique(), &Tolerances::default()).unwrap();
        let ssvd = &an.ssvd;
        assert!((ssvd.sigma[0] - 2f64.sqrt()).abs() < 1e-14);
        assert!(ssvd.sigma[1].abs() < 1e-14);
        assert!((ssvd.angles.psi()[0] - std::f64::consts::FRAC_PI_4).abs() < 1e-14);
        // u_1 = e_1, v_1 = (1,1)/sqrt(2), u_1^H v_1 = 1/sqrt(2).
        assert!((ssvd.u[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!(ssvd.u[(1, 0)].norm() < 1e-14);
        let inv_sqrt2 = 1.0 / 2f64.sqrt();
        assert!((ssvd.v[(0, 0)] - Scalar::new(inv_sqrt2, 0.0)).norm() < 1e-14);
        assert!((ssvd.v[(1, 0)] - Scalar::new(inv_sqrt2, 0.0)).norm() < 1e-14);
        let dot = column_dot(&ssvd.u, 0, &ssvd.v, 0);
        assert!((dot - Scalar::new(inv_sqrt2, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn structured_svd_complex_phase_convention() {
        // [[1, i], [0, 0]] is idempotent; v_1 = (1, -i)/sqrt(2) and the
        // coupling product is real positive.
        let m = Matrix::new(
            2,
            2,
            vec![
                Scalar::new(1.0, 0.0),
                Scalar::new(0.0, 1.0),
                Scalar::new(0.0, 0.0),
                Scalar::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let ssvd = structured_svd_idempotent(&m).unwrap();
        assert!((ssvd.sigma[0] - 2f64.sqrt()).abs() < 1e-14);
        let inv_sqrt2 = 1.0 / 2f64.sqrt();
        assert!((ssvd.v[(0, 0)] - Scalar::new(inv_sqrt2, 0.0)).norm() < 1e-13);
        assert!((ssvd.v[(1, 0)] - Scalar::new(0.0, -inv_sqrt2)).norm() < 1e-13);
        let dot = column_dot(&ssvd.u, 0, &ssvd.v, 0);
        assert!(dot.im.abs() < 1e-14);
        assert!((dot.re - inv_sqrt2).abs() < 1e-13);
    }

    #[test]
    fn condensed_form_sigma_two_one_zero() {
        // N with t=1, r=2, n=3, psi = pi/3: sigma = (2, 1, 0) since
        // 1/cos(pi/3) = 2.
        let n = condensed_matrix(3, 2, 1, &[std::f64::consts::FRAC_PI_3]);
        assert!((n[(0, 2)].re - 3f64.sqrt()).abs() < 1e-15);
        let ssvd = structured_svd_idempotent(&n).unwrap();
        assert!((ssvd.sigma[0] - 2.0).abs() < 1e-12);
        assert!((ssvd.sigma[1] - 1.0).abs() < 1e-12);
        assert!(ssvd.sigma[2].abs() < 1e-12);
        assert_eq!(ssvd.counts.t, 1);
    }

    #[test]
    fn canonical_form_oblique_is_fixed_point() {
        let cf = canonical_form(&oblique()).unwrap();
        assert!(cf.n_matrix.sub(&oblique()).unwrap().frobenius_norm() < 1e-12);
        assert!(cf.schur_u.sub(&Matrix::identity(2)).unwrap().frobenius_norm() < 1e-12);
        assert_eq!(cf.tau.len(), 1);
        assert!((cf.tau[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_form_identity() {
        let cf = canonical_form(&Matrix::identity(3)).unwrap();
        assert!(cf.n_matrix.sub(&Matrix::identity(3)).unwrap().frobenius_norm() < 1e-13);
        assert!(cf.tau.is_empty());
    }

    #[test]
    fn canonical_form_roundtrip_recovers_condensed_matrix() {
        // Hide a known condensed form behind a Haar unitary and recover it.
        let n0 = condensed_matrix(6, 2, 2, &[1.0, 0.5]);
        let q = haar_unitary(6, 77);
        let m = &(&q * &n0) * &q.adjoint();
        let cf = canonical_form(&m).unwrap();
        let dev = cf.n_matrix.sub(&n0).unwrap().max_abs();
        assert!(dev < 1e-10, "entrywise deviation {dev:.3e}");
    }

    #[test]
    fn coupling_oblique_matches_pattern() {
        let an = analyze_idempotent(&oblique(), &Tolerances::default()).unwrap();
        let o = &an.coupling.o;
        let inv_sqrt2 = 1.0 / 2f64.sqrt();
        assert_eq!(an.coupling.signs, vec![1.0]);
        assert!(!an.coupling.degenerate);
        assert!((o[(0, 0)].re - inv_sqrt2).abs() < 1e-13);
        assert!((o[(0, 1)].re - inv_sqrt2).abs() < 1e-13);
        assert!((o[(1, 0)].re - inv_sqrt2).abs() < 1e-13);
        assert!((o[(1, 1)].re + inv_sqrt2).abs() < 1e-13);
    }

    #[test]
    fn coupling_identity_collapses() {
        let an = analyze_idempotent(&Matrix::identity(3), &Tolerances::default()).unwrap();
        assert!(an
            .coupling
            .o
            .sub(&Matrix::identity(3))
            .unwrap()
            .frobenius_norm()
            < 1e-12);
        assert!(an.coupling.signs.is_empty());
    }

    #[test]
    fn coupling_recovers_generator_cosines() {
        let spec = GeneratorSpec::new(6, 2, 2, vec![1.0, 0.5], 3).unwrap();
        let (m, _, _) = idempotent_from_spec(&spec).unwrap();
        let an = analyze_idempotent(&m, &Tolerances::default()).unwrap();
        let o = &an.coupling.o;
        assert!((o[(0, 0)].re - 1.0f64.cos()).abs() < 1e-8);
        assert!((o[(1, 1)].re - 0.5f64.cos()).abs() < 1e-8);
        assert!(an.coupling.pattern_residual.unwrap() < 1e-8);
    }

    #[test]
    fn coupling_degenerate_angles_flagged() {
        let spec = GeneratorSpec::new(6, 2, 2, vec![0.7, 0.7], 11).unwrap();
        let (m, _, _) = idempotent_from_spec(&spec).unwrap();
        let an = analyze_idempotent(&m, &Tolerances::default()).unwrap();
        assert!(an.coupling.degenerate);
        assert!(an.coupling.pattern_residual.is_none());
    }

    #[test]
    fn principal_angles_examples() {
        let angles = principal_angles(&oblique()).unwrap();
        assert_eq!(angles.len(), 1);
        assert!((angles[0] - std::f64::consts::FRAC_PI_4).abs() < 1e-12);

        let id = principal_angles(&Matrix::identity(3)).unwrap();
        assert!(id.iter().all(|&a| a.abs() < 1e-7));

        // Hermitian idempotent (orthogonal projector): all angles zero.
        let half = Matrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let orth = principal_angles(&half).unwrap();
        assert!(orth.iter().all(|&a| a.abs() < 1e-7));
        let ssvd = structured_svd_idempotent(&half).unwrap();
        assert_eq!(ssvd.counts.t, 0);
    }

    #[test]
    fn unit_class_vectors_coincide() {
        // For sigma_j = 1 the left and right singular vectors agree after
        // phase fixing (equality case of the coupling lemma).
        let spec = GeneratorSpec::new(8, 4, 2, vec![1.1, 0.4], 29).unwrap();
        let (m, counts, _) = idempotent_from_spec(&spec).unwrap();
        let an = analyze_idempotent(&m, &Tolerances::default()).unwrap();
        for j in counts.t..counts.r {
            let mut dev = 0.0f64;
            for i in 0..m.rows() {
                dev = dev.max((an.ssvd.u[(i, j)] - an.ssvd.v[(i, j)]).norm());
            }
            assert!(dev < 1e-8, "column {j} deviates by {dev:.3e}");
        }
    }

    #[test]
    fn lemma_coupling_products() {
        let spec = GeneratorSpec::new(10, 4, 3, vec![1.3, 0.9, 0.2], 5).unwrap();
        let (m, _, _) = idempotent_from_spec(&spec).unwrap();
        let an = analyze_idempotent(&m, &Tolerances::default()).unwrap();
        let r = an.ssvd.counts.r;
        // u_j^H v_j = 1/sigma_j, and U_r^H V_r is diagonal.
        let ur = an.ssvd.u.column_block(0, r);
        let vr = an.ssvd.v.column_block(0, r);
        let prod = ur.adjoint().matmul(&vr).unwrap();
        let mut off = 0.0;
        for i in 0..r {
            for j in 0..r {
                if i == j {
                    let expect = 1.0 / an.ssvd.sigma[i];
                    assert!((prod[(i, j)] - Scalar::new(expect, 0.0)).norm() < 1e-9);
                } else {
                    off += prod[(i, j)].norm_sqr();
                }
            }
        }
        assert!(off.sqrt() < 1e-8);
    }

    #[test]
    fn census_error_reports_both_values() {
        // Force a census mismatch by an absurd manual count threshold.
        let spec = GeneratorSpec::new(6, 3, 2, vec![1.0, 0.8], 13).unwrap();
        let (m, _, _) = idempotent_from_spec(&spec).unwrap();
        let tol = Tolerances {
            count: Some(1e3),
            ..Tolerances::default()
        };
        match analyze_idempotent(&m, &tol) {
            Err(Error::CensusMismatch { threshold_t, rank_null_t }) => {
                assert_eq!(threshold_t, 0);
                assert_eq!(rank_null_t, 2);
            }
            other => panic!("expected census mismatch, got {:?}", other.map(|_| ())),
        }
    }
}
