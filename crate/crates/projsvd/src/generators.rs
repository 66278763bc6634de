//! Ground-truth synthesis of idempotent and involutory matrices.
//!
//! A [`GeneratorSpec`] prescribes order, rank, the number of oblique
//! directions and their angles; the generator hides the corresponding
//! condensed form behind a Haar-random unitary. The prescription travels
//! with the matrix, so round-trip tests never re-derive truth from the
//! code under test.

use std::fmt;
use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::idempotent::{condensed_matrix, AngleSpectrum, CountProfile};
use crate::involutory::Sign;
use crate::kernels::householder_qr;
use crate::matrix::{Matrix, Scalar};

/// Margin kept between prescribed angles and pi/2; tangents overflow
/// beyond it.
pub const ANGLE_GUARD: f64 = 1e-12;

/// Prescription for a synthetic idempotent: order `n`, rank `r`, number
/// of oblique angles `t`, the angles themselves (non-increasing, strictly
/// inside `(0, pi/2)`), and the RNG seed.
///
/// Serialized as `n:r:t:psi1,psi2,...:seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub n: usize,
    pub r: usize,
    pub t: usize,
    pub psi: Vec<f64>,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(n: usize, r: usize, t: usize, psi: Vec<f64>, seed: u64) -> Result<Self> {
        if r > n {
            return Err(Error::InvalidSpec(format!("rank {} exceeds order {}", r, n)));
        }
        if t > r.min(n - r) {
            return Err(Error::InvalidSpec(format!(
                "t = {} exceeds min(r, n - r) = {}",
                t,
                r.min(n - r)
            )));
        }
        if psi.len() != t {
            return Err(Error::InvalidSpec(format!(
                "{} angles given for t = {}",
                psi.len(),
                t
            )));
        }
        for w in psi.windows(2) {
            if w[1] > w[0] {
                return Err(Error::InvalidSpec(format!("angles not non-increasing: {:?}", psi)));
            }
        }
        for &p in &psi {
            if !(p > 0.0 && p < FRAC_PI_2) {
                return Err(Error::InvalidSpec(format!("angle {} outside (0, pi/2)", p)));
            }
            if FRAC_PI_2 - p < ANGLE_GUARD {
                return Err(Error::InvalidSpec(format!(
                    "angle {} within {:.0e} of pi/2: tangent overflows",
                    p, ANGLE_GUARD
                )));
            }
        }
        Ok(GeneratorSpec { n, r, t, psi, seed })
    }

    /// Parses the `n:r:t:psi1,psi2,...:seed` form (empty angle list for t = 0).
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!(
                "spec '{}' must have 5 colon-separated fields n:r:t:psi,...:seed",
                text
            )));
        }
        let n = parts[0]
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("bad n '{}': {}", parts[0], e)))?;
        let r = parts[1]
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("bad r '{}': {}", parts[1], e)))?;
        let t = parts[2]
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("bad t '{}': {}", parts[2], e)))?;
        let psi = if parts[3].is_empty() {
            vec![]
        } else {
            parts[3]
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad angle '{}': {}", tok, e)))
                })
                .collect::<Result<Vec<f64>>>()?
        };
        let seed = parts[4]
            .parse::<u64>()
            .map_err(|e| Error::Parse(format!("bad seed '{}': {}", parts[4], e)))?;
        GeneratorSpec::new(n, r, t, psi, seed)
    }

    /// Whether any prescribed angle repeats (feeds the degenerate
    /// coupling paths downstream).
    pub fn has_repeated_angles(&self) -> bool {
        self.psi.windows(2).any(|w| w[0] == w[1])
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let angles: Vec<String> = self.psi.iter().map(|p| format!("{}", p)).collect();
        write!(f, "{}:{}:{}:{}:{}", self.n, self.r, self.t, angles.join(","), self.seed)
    }
}

/// Haar-distributed random unitary: QR of a complex standard-Gaussian
/// matrix with the R-diagonal phases absorbed into Q.
///
/// Driven by ChaCha8 seeded from `seed`, so identical calls produce
/// bitwise-identical matrices on any platform running this crate.
pub fn haar_unitary(n: usize, seed: u64) -> Matrix {
    if n == 0 {
        return Matrix::identity(0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inv_sqrt2 = 1.0 / 2f64.sqrt();
    let gauss = Matrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Scalar::new(re * inv_sqrt2, im * inv_sqrt2)
    });
    // householder_qr normalizes the R diagonal to be real non-negative,
    // which is exactly the phase correction that makes Q Haar.
    let (q, _r) = householder_qr(&gauss);
    q
}

/// Builds `M = U N U^H` from the prescription, returning the matrix with
/// its ground-truth census and angle spectrum.
pub fn idempotent_from_spec(spec: &GeneratorSpec) -> Result<(Matrix, CountProfile, AngleSpectrum)> {
    let n_matrix = condensed_matrix(spec.n, spec.r, spec.t, &spec.psi);
    let q = haar_unitary(spec.n, spec.seed);
    let m = q.matmul(&n_matrix)?.matmul(&q.adjoint())?;
    let counts = CountProfile::new(spec.n, spec.r, spec.t)?;
    let mut psi_full = spec.psi.clone();
    psi_full.resize(spec.r, 0.0);
    let angles = AngleSpectrum::new(psi_full)?;
    Ok((m, counts, angles))
}

/// Builds the involutory matrix `sign * (2 M - I)` over the same
/// prescription.
pub fn involutory_from_spec(spec: &GeneratorSpec, sign: Sign) -> Result<Matrix> {
    let (m, _, _) = idempotent_from_spec(spec)?;
    let b = m
        .scale_re(2.0)
        .sub(&Matrix::identity(spec.n))?
        .scale_re(sign.value());
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idempotent::{structured_svd_idempotent, validate_idempotent};
    use crate::involutory::validate_involutory;

    #[test]
    fn haar_unitary_is_unitary_and_deterministic() {
        for &n in &[1usize, 3, 8] {
            let u = haar_unitary(n, 42);
            assert!(u.orthonormality_defect() <= 100.0 * n as f64 * f64::EPSILON);
            assert_eq!(u, haar_unitary(n, 42));
        }
        let scalar = haar_unitary(1, 7);
        assert!((scalar[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert_ne!(haar_unitary(3, 1), haar_unitary(3, 2));
    }

    #[test]
    fn spec_validation() {
        assert!(GeneratorSpec::new(4, 5, 0, vec![], 0).is_err());
        assert!(GeneratorSpec::new(4, 2, 3, vec![0.1, 0.1, 0.1], 0).is_err());
        assert!(GeneratorSpec::new(4, 2, 1, vec![], 0).is_err());
        assert!(GeneratorSpec::new(4, 2, 2, vec![0.3, 0.5], 0).is_err());
        assert!(GeneratorSpec::new(4, 2, 1, vec![FRAC_PI_2 - 1e-13], 0).is_err());
        assert!(GeneratorSpec::new(4, 2, 1, vec![0.0], 0).is_err());
        assert!(GeneratorSpec::new(4, 2, 2, vec![0.5, 0.5], 0).is_ok());
    }

    #[test]
    fn spec_parse_roundtrip() {
        let spec = GeneratorSpec::new(6, 2, 2, vec![1.0, 0.3], 42).unwrap();
        let text = spec.to_string();
        assert_eq!(GeneratorSpec::parse(&text).unwrap(), spec);

        let trivial = GeneratorSpec::parse("3:3:0::1").unwrap();
        assert_eq!(trivial.t, 0);
        assert!(trivial.psi.is_empty());

        assert!(GeneratorSpec::parse("3:3:0:1").is_err());
        assert!(GeneratorSpec::parse("a:3:0::1").is_err());
    }

    #[test]
    fn generated_idempotent_is_idempotent() {
        let spec = GeneratorSpec::new(2, 1, 1, vec![std::f64::consts::FRAC_PI_4], 9).unwrap();
        let (m, counts, _) = idempotent_from_spec(&spec).unwrap();
        assert!(validate_idempotent(&m).unwrap() <= 1e-12 * 2.0);
        assert_eq!((counts.r, counts.s, counts.t, counts.nu), (1, 1, 1, 1));
        let ssvd = structured_svd_idempotent(&m).unwrap();
        assert!((ssvd.sigma[0] - 2f64.sqrt()).abs() < 1e-12);
        assert!(ssvd.sigma[1].abs() < 1e-12);
    }

    #[test]
    fn full_rank_spec_reproduces_identity() {
        let spec = GeneratorSpec::new(3, 3, 0, vec![], 5).unwrap();
        let (m, _, _) = idempotent_from_spec(&spec).unwrap();
        assert!(m.sub(&Matrix::identity(3)).unwrap().frobenius_norm() < 1e-13);
    }

    #[test]
    fn roundtrip_census_and_angles() {
        let spec = GeneratorSpec::new(6, 2, 2, vec![1.0, 0.3], 21).unwrap();
        let (m, counts, angles) = idempotent_from_spec(&spec).unwrap();
        let ssvd = structured_svd_idempotent(&m).unwrap();
        assert_eq!(ssvd.counts, counts);
        for (got, want) in ssvd.angles.psi().iter().zip(angles.psi()) {
            assert!((got - want).abs() < 1e-8, "angle {got} vs {want}");
        }
        // sigma = (1/cos 1.0, 1/cos 0.3, 0, 0, 0, 0).
        assert!((ssvd.sigma[0] - 1.0 / 1.0f64.cos()).abs() < 1e-10);
        assert!((ssvd.sigma[1] - 1.0 / 0.3f64.cos()).abs() < 1e-10);
        assert!(ssvd.sigma[2..].iter().all(|&s| s < 1e-10));
    }

    #[test]
    fn determinism_is_bitwise() {
        let spec = GeneratorSpec::new(5, 2, 1, vec![0.9], 1234).unwrap();
        let (a, _, _) = idempotent_from_spec(&spec).unwrap();
        let (b, _, _) = idempotent_from_spec(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn involutory_from_spec_is_involutory() {
        let spec = GeneratorSpec::new(5, 2, 1, vec![0.7], 77).unwrap();
        for sign in [Sign::Plus, Sign::Minus] {
            let b = involutory_from_spec(&spec, sign).unwrap();
            assert!(validate_involutory(&b).unwrap() <= 1e-11 / (0.7f64.cos()).powi(2));
        }
    }

    #[test]
    fn full_rank_involutory_is_identity() {
        let spec = GeneratorSpec::new(3, 3, 0, vec![], 77).unwrap();
        let b = involutory_from_spec(&spec, Sign::Plus).unwrap();
        assert!(b.sub(&Matrix::identity(3)).unwrap().frobenius_norm() < 1e-13);
    }
}
