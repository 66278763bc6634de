//! SVD of involutory matrices `B = +/-(2M - I)`.
//!
//! The singular values of an involutory matrix come in reciprocal pairs
//! `(sigma, 1/sigma)` bridged to the principal angles of the underlying
//! idempotent by `sigma = tan(phi)` with `phi = (pi/2 + psi)/2`; the
//! remaining `n - 2 nu` values equal one. The left singular vectors are a
//! signed permutation of the right ones in canonical order.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::idempotent::{analyze_idempotent, CountProfile, Tolerances};
use crate::matrix::{Matrix, Permutation, Scalar};

/// Orientation in `B = sign * (2M - I)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "+1" => Ok(Sign::Plus),
            "-1" => Ok(Sign::Minus),
            other => Err(Error::Parse(format!("sign must be +1 or -1, got '{}'", other))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if *self == Sign::Plus { "+1" } else { "-1" })
    }
}

/// The signed permutation relating canonical left and right singular
/// vectors: column `j` of the matrix form carries `signs[j]` at row
/// `rows.map()[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TnStructure {
    pub rows: Permutation,
    pub signs: Vec<f64>,
}

impl TnStructure {
    fn build(n: usize, nu: usize, middle_sign: f64) -> Self {
        let mut map = vec![0usize; n];
        let mut signs = vec![1.0; n];
        for j in 0..nu {
            map[j] = n - nu + j;
            map[n - nu + j] = j;
        }
        for j in nu..(n - nu) {
            map[j] = j;
            signs[j] = middle_sign;
        }
        TnStructure {
            rows: Permutation::new(map).expect("swap structure is a bijection"),
            signs,
        }
    }

    pub fn to_matrix(&self) -> Matrix {
        let n = self.signs.len();
        let mut t = Matrix::zeros(n, n);
        for j in 0..n {
            t[(self.rows.map()[j], j)] = Scalar::new(self.signs[j], 0.0);
        }
        t
    }
}

/// SVD of an involutory matrix with the reciprocal-pair bookkeeping.
#[derive(Debug, Clone)]
pub struct InvolutorySVD {
    /// Left factor, singular values sorted non-increasing.
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
    /// `phi_j = (pi/2 + psi_j)/2` for the oblique part, `pi/4` beyond;
    /// length `nu`.
    pub phi: Vec<f64>,
    /// Index pairs `(j, k)` in sorted order with `sigma_j * sigma_k = 1`.
    pub pairing: Vec<(usize, usize)>,
    /// Census of the underlying idempotent.
    pub counts: CountProfile,
    /// Signed permutation with `V = U T` in canonical order.
    pub tn: TnStructure,
    /// Canonical-order factors of `2M - I` (kept before the final sort;
    /// the public `u` absorbs the overall sign).
    pub u_canonical: Matrix,
    pub v_canonical: Matrix,
    pub sigma_canonical: Vec<f64>,
    /// +1 when `r >= s`, -1 when `r <= s` (empty middle block at r = s).
    pub middle_sign: f64,
}

/// Per-clause outcome of [`pairing_check`].
#[derive(Debug, Clone)]
pub struct PairReport {
    pub pairs: usize,
    pub max_product_deviation: f64,
    pub products_ok: bool,
    pub unit_pairs: usize,
    pub expected_unit_pairs: usize,
    pub unpaired: usize,
    pub expected_unpaired: usize,
    pub unpaired_all_unit: bool,
    pub pass: bool,
}

pub const PAIR_PRODUCT_TOL: f64 = 1e-9;

/// Relative involution residual `||b^2 - I||_F / max(1, ||b||_F)`.
pub fn validate_involutory(b: &Matrix) -> Result<f64> {
    if !b.is_square() {
        return Err(Error::Shape {
            op: "validate_involutory",
            details: format!("{}x{} input, square required", b.rows(), b.cols()),
        });
    }
    let b2 = b.matmul(b)?;
    let dev = b2.sub(&Matrix::identity(b.rows()))?.frobenius_norm();
    Ok(dev / b.frobenius_norm().max(1.0))
}

fn ensure_involutory(b: &Matrix, tol: &Tolerances) -> Result<f64> {
    let residual = validate_involutory(b)?;
    if residual > tol.invol {
        return Err(Error::Domain {
            op: "involutory",
            details: "matrix is not involutory",
            residual,
            tol: tol.invol,
        });
    }
    Ok(residual)
}

/// Recovers the idempotent `M = (sign * B + I) / 2`.
pub fn idempotent_from_involutory(b: &Matrix, sign: Sign) -> Result<Matrix> {
    ensure_involutory(b, &Tolerances::default())?;
    let n = b.rows();
    b.scale_re(0.5 * sign.value()).add(&Matrix::identity(n).scale_re(0.5))
}

/// SVD of an involutory matrix through the structured decomposition of
/// its idempotent half.
pub fn involutory_svd(b: &Matrix, sign: Sign) -> Result<InvolutorySVD> {
    involutory_svd_with(b, sign, &Tolerances::default())
}

pub fn involutory_svd_with(b: &Matrix, sign: Sign, tol: &Tolerances) -> Result<InvolutorySVD> {
    ensure_involutory(b, tol)?;
    let n = b.rows();
    let m = b.scale_re(0.5 * sign.value()).add(&Matrix::identity(n).scale_re(0.5))?;
    let analysis = analyze_idempotent(&m, tol)?;
    let counts = analysis.ssvd.counts;
    let (r, s, t, nu) = (counts.r, counts.s, counts.t, counts.nu);
    let psi = analysis.ssvd.angles.psi();

    // Schur columns of the idempotent, grouped as laid out by the
    // canonical form: range vectors, joint kernel, tangent directions.
    let schur = &analysis.canonical.schur_u;
    let u_cols = schur.column_block(0, r);
    let kernel = schur.column_block(r, n - t);
    let y_cols = schur.column_block(n - t, n);

    // Reorder into the nu-blocked Schur basis. The middle block must
    // carry fixed vectors of M when r >= s and null vectors when r <= s.
    let mut schur_nu = Matrix::zeros(n, n);
    let mut col = 0;
    let push = |mat: &Matrix, j: usize, schur_nu: &mut Matrix, col: &mut usize| {
        for i in 0..n {
            schur_nu[(i, *col)] = mat[(i, j)];
        }
        *col += 1;
    };
    if r <= s {
        for j in 0..r {
            push(&u_cols, j, &mut schur_nu, &mut col);
        }
        for j in (r - t)..(s - t) {
            push(&kernel, j, &mut schur_nu, &mut col);
        }
        for j in 0..t {
            push(&y_cols, j, &mut schur_nu, &mut col);
        }
        for j in 0..(r - t) {
            push(&kernel, j, &mut schur_nu, &mut col);
        }
    } else {
        for j in 0..s {
            push(&u_cols, j, &mut schur_nu, &mut col);
        }
        for j in s..r {
            push(&u_cols, j, &mut schur_nu, &mut col);
        }
        for j in 0..t {
            push(&y_cols, j, &mut schur_nu, &mut col);
        }
        for j in 0..(s - t) {
            push(&kernel, j, &mut schur_nu, &mut col);
        }
    }
    debug_assert_eq!(col, n);

    let middle_sign = if r >= s { 1.0 } else { -1.0 };

    // Closed-form factors of the condensed involution 2N - I.
    let mut phi = vec![FRAC_PI_4; nu];
    for j in 0..t {
        phi[j] = 0.5 * (FRAC_PI_2 + psi[j]);
    }
    let mut sigma_canonical = vec![1.0; n];
    for j in 0..t {
        let tan_phi = phi[j].tan();
        sigma_canonical[j] = tan_phi;
        sigma_canonical[n - nu + j] = 1.0 / tan_phi;
    }

    let mut u_n = Matrix::zeros(n, n);
    let mut v_n = Matrix::zeros(n, n);
    for j in 0..nu {
        let (sn, cs) = phi[j].sin_cos();
        u_n[(j, j)] = Scalar::new(sn, 0.0);
        u_n[(j, n - nu + j)] = Scalar::new(cs, 0.0);
        u_n[(n - nu + j, j)] = Scalar::new(-cs, 0.0);
        u_n[(n - nu + j, n - nu + j)] = Scalar::new(sn, 0.0);
        v_n[(j, j)] = Scalar::new(cs, 0.0);
        v_n[(j, n - nu + j)] = Scalar::new(sn, 0.0);
        v_n[(n - nu + j, j)] = Scalar::new(sn, 0.0);
        v_n[(n - nu + j, n - nu + j)] = Scalar::new(-cs, 0.0);
    }
    for j in nu..(n - nu) {
        u_n[(j, j)] = Scalar::new(middle_sign, 0.0);
        v_n[(j, j)] = Scalar::new(1.0, 0.0);
    }

    let u_canonical = schur_nu.matmul(&u_n)?;
    let v_canonical = schur_nu.matmul(&v_n)?;
    let tn = TnStructure::build(n, nu, middle_sign);

    // Sort non-increasing, tracking where each canonical index lands.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma_canonical[j].partial_cmp(&sigma_canonical[i]).unwrap());
    let mut position = vec![0usize; n];
    for (pos, &idx) in order.iter().enumerate() {
        position[idx] = pos;
    }
    let sigma: Vec<f64> = order.iter().map(|&i| sigma_canonical[i]).collect();
    let flip = sign.value();
    let u = Matrix::from_fn(n, n, |i, j| u_canonical[(i, order[j])] * Scalar::new(flip, 0.0));
    let v = Matrix::from_fn(n, n, |i, j| v_canonical[(i, order[j])]);
    let pairing: Vec<(usize, usize)> = (0..nu).map(|j| (position[j], position[n - nu + j])).collect();

    let rebuilt = u.matmul(&Matrix::diag(&sigma))?.matmul(&v.adjoint())?;
    let residual = rebuilt.sub(b)?.frobenius_norm();
    let rec_tol = tol.rec_tol(b.frobenius_norm());
    if residual > rec_tol {
        return Err(Error::Diagnostic {
            op: "involutory_svd",
            check: "SVD reconstruction",
            residual,
            tol: rec_tol,
        });
    }

    Ok(InvolutorySVD {
        u,
        sigma,
        v,
        phi,
        pairing,
        counts,
        tn,
        u_canonical,
        v_canonical,
        sigma_canonical,
        middle_sign,
    })
}

/// Verifies the reciprocal-pair structure: every pair multiplies to one,
/// `nu - t` pairs are unit pairs, and the `n - 2 nu` unpaired values are
/// unit. Never errors; the report carries one flag per clause.
pub fn pairing_check(isvd: &InvolutorySVD) -> PairReport {
    pairing_check_with(isvd, &Tolerances::default())
}

pub fn pairing_check_with(isvd: &InvolutorySVD, tol: &Tolerances) -> PairReport {
    let n = isvd.counts.n;
    let nu = isvd.counts.nu;
    let t = isvd.counts.t;
    let count_tol = tol.count_tol(n);

    let mut max_dev = 0.0f64;
    let mut unit_pairs = 0;
    let mut in_pair = vec![false; n];
    for &(j, k) in &isvd.pairing {
        in_pair[j] = true;
        in_pair[k] = true;
        max_dev = max_dev.max((isvd.sigma[j] * isvd.sigma[k] - 1.0).abs());
        if (isvd.sigma[j] - 1.0).abs() <= count_tol && (isvd.sigma[k] - 1.0).abs() <= count_tol {
            unit_pairs += 1;
        }
    }
    let unpaired: Vec<usize> = (0..n).filter(|&j| !in_pair[j]).collect();
    let unpaired_all_unit = unpaired
        .iter()
        .all(|&j| (isvd.sigma[j] - 1.0).abs() <= count_tol);

    let products_ok = max_dev <= PAIR_PRODUCT_TOL;
    let pairs = isvd.pairing.len();
    let pass = products_ok
        && pairs == nu
        && unit_pairs == nu - t
        && unpaired.len() == n - 2 * nu
        && unpaired_all_unit;
    PairReport {
        pairs,
        max_product_deviation: max_dev,
        products_ok,
        unit_pairs,
        expected_unit_pairs: nu - t,
        unpaired: unpaired.len(),
        expected_unpaired: n - 2 * nu,
        unpaired_all_unit,
        pass,
    }
}

/// Residual of the signed-permutation relation between canonical left and
/// right singular vectors: `||V - U T||_F` before the final sort.
pub fn tn_relation_check(isvd: &InvolutorySVD) -> f64 {
    let t = isvd.tn.to_matrix();
    let ut = isvd
        .u_canonical
        .matmul(&t)
        .expect("canonical factors are square of the same order");
    isvd.v_canonical
        .sub(&ut)
        .expect("dimensions agree")
        .frobenius_norm()
}
