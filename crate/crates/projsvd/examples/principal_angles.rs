//! Principal angles between the range and co-range of a projector.
//!
//! Run with: cargo run --example principal_angles
//!
//! The singular values of an idempotent matrix above one are exactly the
//! reciprocal cosines of the principal angles between range(M) and
//! range(M^H). The angles here are computed from subspace bases alone and
//! compared against the structured singular values.

use projsvd::generators::{idempotent_from_spec, GeneratorSpec};
use projsvd::idempotent::{principal_angles, structured_svd_idempotent};
use projsvd::matrix::Matrix;

fn main() {
    let spec = GeneratorSpec::new(8, 3, 2, vec![1.2, 0.3], 5).unwrap();
    let (m, _, _) = idempotent_from_spec(&spec).unwrap();

    let angles = principal_angles(&m).unwrap();
    println!("principal angles (rad): {:?}", angles);
    println!("prescribed            : [1.2, 0.3, 0.0]");

    let ssvd = structured_svd_idempotent(&m).unwrap();
    for (j, &psi) in angles.iter().enumerate() {
        println!(
            "sigma_{j} = {:.12}   1/cos(psi_{j}) = {:.12}",
            ssvd.sigma[j],
            1.0 / psi.cos()
        );
    }

    // An orthogonal projector (Hermitian idempotent) has no oblique part:
    // every angle is zero and every singular value is one or zero.
    let half = Matrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
    let angles = principal_angles(&half).unwrap();
    let ssvd = structured_svd_idempotent(&half).unwrap();
    println!("\northogonal projector: angles = {:?}, sigma = {:?}", angles, ssvd.sigma);
}
