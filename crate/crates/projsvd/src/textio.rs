//! The matrix text format, the single interchange format of the crate.
//!
//! Line 1 holds `rows cols`; the remaining tokens are `rows * cols`
//! whitespace-separated `re im` pairs in row-major order, decimal or
//! scientific notation. Lines starting with `#` are comments. The writer
//! emits shortest round-trip representations, so write/read is lossless.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Scalar};

/// Parses a matrix from its text representation.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut tokens = text
        .lines()
        .filter(|line| !line.trim_start().starts_with('#'))
        .flat_map(|line| line.split_whitespace());

    let rows: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad row count: {}", e)))?;
    let cols: usize = tokens
        .next()
        .ok_or_else(|| Error::Parse("missing column count".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad column count: {}", e)))?;

    let mut data = Vec::with_capacity(rows * cols);
    for k in 0..rows * cols {
        let re: f64 = tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {} entries, file ends at {}", rows * cols, k)))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad real part of entry {}: {}", k, e)))?;
        let im: f64 = tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("entry {} is missing its imaginary part", k)))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad imaginary part of entry {}: {}", k, e)))?;
        data.push(Scalar::new(re, im));
    }
    if let Some(extra) = tokens.next() {
        return Err(Error::Parse(format!("trailing token '{}' after {} entries", extra, rows * cols)));
    }
    Matrix::new(rows, cols, data)
}

/// Renders a matrix in the text format, one matrix row per line.
pub fn format_matrix(m: &Matrix) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", m.rows(), m.cols()));
    for i in 0..m.rows() {
        let mut line = String::new();
        for j in 0..m.cols() {
            let z = m[(i, j)];
            if j > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{:e} {:e}", z.re, z.im));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    let text = fs::read_to_string(path)?;
    parse_matrix(&text)
}

pub fn write_matrix(path: &Path, m: &Matrix) -> Result<()> {
    fs::write(path, format_matrix(m))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_with_comments_and_mixed_notation() {
        let text = "# projector example\n2 2\n1.0 0.0  1e0 0\n# trailing comment\n0 0 0.0 -0e0\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m[(0, 1)], Scalar::new(1.0, 0.0));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_matrix(""), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix("2 2\n1 0"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix("1 1\n1 0 7"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix("1 1\nx 0"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix("1 1\nnan 0"), Err(Error::NonFinite { .. })));
        assert!(matches!(parse_matrix("1 1\ninf 0"), Err(Error::NonFinite { .. })));
    }

    proptest! {
        #[test]
        fn write_read_is_lossless(
            rows in 1usize..5,
            cols in 1usize..5,
            raw in proptest::collection::vec((-1e12f64..1e12, -1e12f64..1e12), 16),
        ) {
            let data: Vec<Scalar> = raw
                .iter()
                .take(rows * cols)
                .map(|&(re, im)| Scalar::new(re, im))
                .collect();
            prop_assume!(data.len() == rows * cols);
            let m = Matrix::new(rows, cols, data).unwrap();
            let parsed = parse_matrix(&format_matrix(&m)).unwrap();
            prop_assert_eq!(parsed, m);
        }
    }
}
