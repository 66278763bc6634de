//! The orthogonal coupling between left and right singular vectors.
//!
//! Run with: cargo run --example coupling_matrix
//!
//! For an idempotent matrix the right singular vectors are the left ones
//! rotated by a real orthogonal matrix O whose only nonidentity blocks
//! are cos/sin diagonals in the oblique directions: V = U O with
//! O = [C, 0, ES; 0, I, 0; S, 0, -EC] and E a diagonal sign matrix.

use projsvd::generators::{idempotent_from_spec, GeneratorSpec};
use projsvd::idempotent::{analyze_idempotent, Tolerances};

fn main() {
    let spec = GeneratorSpec::new(5, 2, 2, vec![1.0, 0.5], 99).unwrap();
    let (m, _, _) = idempotent_from_spec(&spec).unwrap();
    let analysis = analyze_idempotent(&m, &Tolerances::default()).unwrap();

    let o = &analysis.coupling.o;
    println!("coupling matrix O = schur_U^H V (real up to rounding):");
    for i in 0..o.rows() {
        let row: Vec<String> = (0..o.cols()).map(|j| format!("{:>8.5}", o[(i, j)].re)).collect();
        println!("  [{}]", row.join(", "));
    }
    println!("recovered signs E = {:?}", analysis.coupling.signs);
    println!(
        "expected cosines: [{:.5}, {:.5}]  sines: [{:.5}, {:.5}]",
        1.0f64.cos(),
        0.5f64.cos(),
        1.0f64.sin(),
        0.5f64.sin()
    );
    match analysis.coupling.pattern_residual {
        Some(res) => println!("pattern deviation: {:.3e}", res),
        None => println!("pattern check skipped (degenerate angle cluster)"),
    }

    // A degenerate prescription with a repeated angle: the blocks of O may
    // legitimately mix, so the pattern assertion is suspended.
    let spec = GeneratorSpec::new(6, 2, 2, vec![0.8, 0.8], 100).unwrap();
    let (m, _, _) = idempotent_from_spec(&spec).unwrap();
    let analysis = analyze_idempotent(&m, &Tolerances::default()).unwrap();
    println!(
        "\nrepeated angle 0.8: degenerate = {}, pattern residual = {:?}",
        analysis.coupling.degenerate, analysis.coupling.pattern_residual
    );
}
