//! Structured SVD of an oblique projector.
//!
//! Run with: cargo run --example structured_svd
//!
//! The 2x2 projector [[1,1],[0,0]] projects onto span{e_1} along the
//! direction (1,-1). Its singular values are (sqrt(2), 0), the principal
//! angle between range and co-range is 45 degrees, and the left/right
//! singular vectors overlap by exactly 1/sigma.

use projsvd::idempotent::{analyze_idempotent, Tolerances};
use projsvd::matrix::Matrix;

fn main() {
    let m = Matrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]);
    println!("M =\n{}", m);

    let analysis = analyze_idempotent(&m, &Tolerances::default()).expect("M is idempotent");
    let ssvd = &analysis.ssvd;

    println!("idempotency residual: {:.3e}", analysis.idempotency_residual);
    println!(
        "census: n={} r={} s={} t={} nu={}",
        ssvd.counts.n, ssvd.counts.r, ssvd.counts.s, ssvd.counts.t, ssvd.counts.nu
    );
    println!("sigma: {:?}", ssvd.sigma);
    println!(
        "principal angles (deg): {:?}",
        ssvd.angles.psi().iter().map(|p| p.to_degrees()).collect::<Vec<_>>()
    );

    // The coupling lemma: u_j^H v_j = 1/sigma_j for every nonzero sigma.
    for j in 0..ssvd.counts.r {
        let mut dot = projsvd::matrix::Scalar::new(0.0, 0.0);
        for i in 0..m.rows() {
            dot += ssvd.u[(i, j)].conj() * ssvd.v[(i, j)];
        }
        println!(
            "u_{j}^H v_{j} = {:.12} + {:.1e}i   (1/sigma_{j} = {:.12})",
            dot.re,
            dot.im,
            1.0 / ssvd.sigma[j]
        );
    }

    println!("reconstruction residual: {:.3e}", analysis.reconstruction_residual);
}
