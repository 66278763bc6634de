//! Reciprocal singular value pairs of involutory matrices.
//!
//! Run with: cargo run --example involutory_pairs
//!
//! For B with B^2 = I the singular values come in pairs (sigma, 1/sigma)
//! with sigma = tan((pi/2 + psi)/2) for the principal angles psi of the
//! idempotent M = (B + I)/2, plus n - 2 nu unpaired ones. In canonical
//! order the right singular vectors are a signed permutation of the left.

use projsvd::involutory::{involutory_svd, pairing_check, tn_relation_check, Sign};
use projsvd::matrix::Matrix;

fn main() {
    // 2 N - I for the condensed 3x3 projector with psi = pi/3.
    let sqrt3 = 3f64.sqrt();
    let n = Matrix::from_real_rows(&[&[1.0, 0.0, sqrt3], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]);
    let b = n.scale_re(2.0).sub(&Matrix::identity(3)).unwrap();
    println!("B = 2N - I =\n{}", b);

    let isvd = involutory_svd(&b, Sign::Plus).unwrap();
    println!("sigma = {:?}", isvd.sigma);
    println!("phi (rad) = {:?}   (phi_1 = 5 pi / 12 = {:.12})", isvd.phi, 5.0 * std::f64::consts::PI / 12.0);
    for &(j, k) in &isvd.pairing {
        println!(
            "pair ({j}, {k}): sigma_{j} * sigma_{k} = {:.15}",
            isvd.sigma[j] * isvd.sigma[k]
        );
    }

    let report = pairing_check(&isvd);
    println!(
        "pairs {} (unit pairs {}/{}), unpaired unit values {}/{}, pass = {}",
        report.pairs,
        report.unit_pairs,
        report.expected_unit_pairs,
        report.unpaired,
        report.expected_unpaired,
        report.pass
    );

    let tn = isvd.tn.to_matrix();
    println!("T (signed permutation, canonical order) =\n{}", tn);
    println!("||V - U T||_F = {:.3e}", tn_relation_check(&isvd));
}
