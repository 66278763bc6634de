//! Canonical condensed form of a projector and its recovery.
//!
//! Run with: cargo run --example canonical_form
//!
//! Every idempotent matrix is unitarily similar to a real matrix N that
//! is the identity on its rank block plus a diagonal tangent coupling in
//! the top-right corner. This example hides a known N behind a random
//! unitary and recovers it entrywise.

use projsvd::generators::haar_unitary;
use projsvd::idempotent::{canonical_form, condensed_matrix};

fn main() {
    // n = 6, rank 2, both range directions oblique: angles 1.0 and 0.4 rad.
    let n0 = condensed_matrix(6, 2, 2, &[1.0, 0.4]);
    println!("hidden condensed form N0 =\n{}", n0);

    let q = haar_unitary(6, 2024);
    let m = &(&q * &n0) * &q.adjoint();
    println!("M = Q N0 Q^H is dense; ||M||_F = {:.6}", m.frobenius_norm());

    let cf = canonical_form(&m).expect("M is idempotent");
    println!("recovered tangents tau = {:?}", cf.tau);
    println!("expected tangents      = [{}, {}]", 1.0f64.tan(), 0.4f64.tan());

    let deviation = cf.n_matrix.sub(&n0).unwrap().max_abs();
    println!("entrywise |N - N0| max: {:.3e}", deviation);

    let schur_residual = (&(&m * &cf.schur_u) - &(&cf.schur_u * &cf.n_matrix)).frobenius_norm();
    println!("Schur residual ||M U - U N||_F: {:.3e}", schur_residual);
}
