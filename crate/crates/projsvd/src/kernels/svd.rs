//! One-sided Jacobi SVD, used as the independent oracle for every
//! structured decomposition in the crate.

use num_complex::Complex64;

use crate::kernels::orthonormal_completion;
use crate::matrix::{Matrix, Scalar};

/// Full SVD `A = U diag(sigma) V^H` with square unitary factors and
/// singular values sorted non-increasing.
#[derive(Debug, Clone)]
pub struct OracleSVD {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

const MAX_SWEEPS: usize = 60;

/// Computes the SVD of an arbitrary dense matrix by one-sided Jacobi:
/// right rotations orthogonalize the columns, whose norms then read off
/// the singular values. Deterministic for a fixed input; no randomness.
///
/// Wide inputs are handled by factoring the adjoint and swapping factors.
pub fn svd_oracle(a: &Matrix) -> OracleSVD {
    let m = a.rows();
    let n = a.cols();
    if m < n {
        let swapped = svd_oracle(&a.adjoint());
        return OracleSVD {
            u: swapped.v,
            sigma: swapped.sigma,
            v: swapped.u,
        };
    }
    if n == 0 {
        return OracleSVD {
            u: Matrix::identity(m),
            sigma: vec![],
            v: Matrix::identity(0),
        };
    }

    let mut work = a.clone();
    let mut v = Matrix::identity(n);
    let pair_tol = f64::EPSILON * (m.max(n) as f64);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut gpp = 0.0;
                let mut gqq = 0.0;
                let mut gpq = Complex64::new(0.0, 0.0);
                for i in 0..m {
                    let wp = work[(i, p)];
                    let wq = work[(i, q)];
                    gpp += wp.norm_sqr();
                    gqq += wq.norm_sqr();
                    gpq += wp.conj() * wq;
                }
                if gpp == 0.0 || gqq == 0.0 {
                    continue;
                }
                let g = gpq.norm();
                if g <= pair_tol * (gpp * gqq).sqrt() {
                    continue;
                }
                rotated = true;

                let phase = gpq / g;
                // Same rotation as the two-sided Jacobi, applied to the
                // 2x2 Gram block: smaller root of t^2 - 2 tau t - 1 = 0.
                let tau = (gpp - gqq) / (2.0 * g);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let cs = Complex64::new(c, 0.0);
                let s_phase = phase * s;
                let s_phase_conj = phase.conj() * s;

                for i in 0..m {
                    let wp = work[(i, p)];
                    let wq = work[(i, q)];
                    work[(i, p)] = cs * wp - s_phase_conj * wq;
                    work[(i, q)] = s_phase * wp + cs * wq;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = cs * vp - s_phase_conj * vq;
                    v[(i, q)] = s_phase * vp + cs * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    // Column norms are the singular values; sort everything descending.
    let mut norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| work[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    let sorted_work = Matrix::from_fn(m, n, |i, j| work[(i, order[j])]);
    let sorted_v = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    norms = order.iter().map(|&j| norms[j]).collect();

    // Left factor: normalized nonzero columns, completed to a unitary.
    let sigma1 = norms.first().copied().unwrap_or(0.0);
    let cut = (m.max(n)) as f64 * f64::EPSILON * sigma1;
    let nonzero = norms.iter().filter(|&&s| s > cut).count();
    let mut u_left = Matrix::zeros(m, nonzero);
    for j in 0..nonzero {
        let inv = 1.0 / norms[j];
        for i in 0..m {
            u_left[(i, j)] = sorted_work[(i, j)] * Scalar::new(inv, 0.0);
        }
    }
    let u = if nonzero == m {
        u_left
    } else {
        let completion = orthonormal_completion(&u_left)
            .expect("Jacobi-orthogonalized columns are orthonormal");
        u_left.hcat(&completion).expect("row counts agree")
    };

    OracleSVD {
        u,
        sigma: norms,
        v: sorted_v,
    }
}

impl OracleSVD {
    /// Reconstruction residual `||A - U diag(sigma) V^H||_F`.
    pub fn reconstruction_residual(&self, a: &Matrix) -> f64 {
        let m = self.u.rows();
        let n = self.v.rows();
        let s = Matrix::diag_rect(m, n, &self.sigma);
        let rebuilt = &(&self.u * &s) * &self.v.adjoint();
        (&rebuilt - a).frobenius_norm()
    }
}
