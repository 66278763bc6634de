//! Dense complex matrices in row-major storage.
//!
//! `Matrix` is the universal carrier for every factor that appears in the
//! structured decompositions: projectors, unitary factors, triangular
//! factors, condensed forms. Entries are `num_complex::Complex64`; all
//! construction paths reject NaN and infinite entries.

use std::fmt;
use std::ops::{Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout; `re`/`im` are IEEE doubles.
pub type Scalar = Complex64;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    /// Builds a matrix from row-major data, checking length and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape {
                op: "Matrix::new",
                details: format!("{}x{} needs {} entries, got {}", rows, cols, rows * cols, data.len()),
            });
        }
        let m = Matrix { rows, cols, data };
        m.check_finite()?;
        Ok(m)
    }

    /// Zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from a closure over (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from real row slices (test and example helper).
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix::from_fn(r, c, |i, j| Scalar::new(rows[i][j], 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    fn check_finite(&self) -> Result<()> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    /// Conventional matrix product. Errors on inner-dimension mismatch.
    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape {
                op: "matmul",
                details: format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols),
            });
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Matrix) -> Matrix {
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut out = Matrix::zeros(m, n);
        for i in 0..m {
            for l in 0..k {
                let a = self[(i, l)];
                if a == Scalar::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(l, j)];
                }
            }
        }
        out
    }

    /// Conjugate transpose. An exact involution: `a.adjoint().adjoint() == a`.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Frobenius norm: square root of the sum of squared moduli.
    ///
    /// The squared moduli are accumulated in sorted order, which makes the
    /// result independent of entry layout; in particular
    /// `a.adjoint().frobenius_norm() == a.frobenius_norm()` exactly.
    pub fn frobenius_norm(&self) -> f64 {
        let mut squares: Vec<f64> = self.data.iter().map(|z| z.norm_sqr()).collect();
        squares.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        squares.iter().sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix, op: &'static str, f: impl Fn(Scalar, Scalar) -> Scalar) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape {
                op,
                details: format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols),
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Scalar multiple.
    pub fn scale(&self, s: Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Matrix {
        self.scale(Scalar::new(s, 0.0))
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Scalar]) {
        assert_eq!(col.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = col[i];
        }
    }

    /// Submatrix of columns `lo..hi`.
    pub fn column_block(&self, lo: usize, hi: usize) -> Matrix {
        assert!(lo <= hi && hi <= self.cols);
        Matrix::from_fn(self.rows, hi - lo, |i, j| self[(i, lo + j)])
    }

    /// Submatrix of rows `lo..hi`.
    pub fn row_block(&self, lo: usize, hi: usize) -> Matrix {
        assert!(lo <= hi && hi <= self.rows);
        Matrix::from_fn(hi - lo, self.cols, |i, j| self[(lo + i, j)])
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::Shape {
                op: "hcat",
                details: format!("{} rows vs {} rows", self.rows, other.rows),
            });
        }
        Ok(Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        }))
    }

    /// Real diagonal matrix from a slice.
    pub fn diag(values: &[f64]) -> Matrix {
        let n = values.len();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::new(values[i], 0.0);
        }
        m
    }

    /// Rectangular `rows x cols` matrix holding `values` on the main diagonal.
    pub fn diag_rect(rows: usize, cols: usize, values: &[f64]) -> Matrix {
        let mut m = Matrix::zeros(rows, cols);
        for (i, &v) in values.iter().enumerate().take(rows.min(cols)) {
            m[(i, i)] = Scalar::new(v, 0.0);
        }
        m
    }

    /// `||self^H self - I||_F`, the deviation from orthonormal columns.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.adjoint().mul_unchecked(self);
        let mut sum = 0.0;
        for i in 0..gram.rows {
            for j in 0..gram.cols {
                let want = if i == j { Scalar::new(1.0, 0.0) } else { Scalar::new(0.0, 0.0) };
                sum += (gram[(i, j)] - want).norm_sqr();
            }
        }
        sum.sqrt()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Panicking product for internal pipelines where shapes are known good.
impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs).expect("inner dimensions agree")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        Matrix::sub(self, rhs).expect("dimensions agree")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:>11.4e}{:+.4e}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Which side of the matrix a permutation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermSide {
    /// Rows: returns `P^T A`.
    Rows,
    /// Columns: returns `A P`.
    Cols,
    /// Both: returns `P^T A P`.
    Symmetric,
}

/// A bijection on `{0, ..., n-1}`, stored as the image sequence.
///
/// As a matrix, `P[i][j] = 1` iff `i == map[j]`; applying `Symmetric` to
/// `A` yields `B` with `B[i][j] = A[map[i]][map[j]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation(format!("{:?} is not a bijection on 0..{}", map, n)));
            }
            seen[v] = true;
        }
        Ok(Permutation { map })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { map: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn swap(&mut self, i: usize, j: usize) {
        self.map.swap(i, j);
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0usize; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { map: inv }
    }

    /// Applies the permutation to `a` on the requested side.
    ///
    /// Permutations are exact index relabelings: entries move, never round.
    pub fn apply(&self, a: &Matrix, side: PermSide) -> Result<Matrix> {
        let n = self.map.len();
        let check = |dim: usize, what: &str| -> Result<()> {
            if dim != n {
                return Err(Error::Shape {
                    op: "apply_permutation",
                    details: format!("permutation of size {} against {} {}", n, dim, what),
                });
            }
            Ok(())
        };
        match side {
            PermSide::Rows => {
                check(a.rows(), "rows")?;
                Ok(Matrix::from_fn(a.rows(), a.cols(), |i, j| a[(self.map[i], j)]))
            }
            PermSide::Cols => {
                check(a.cols(), "cols")?;
                Ok(Matrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, self.map[j])]))
            }
            PermSide::Symmetric => {
                check(a.rows(), "rows")?;
                check(a.cols(), "cols")?;
                Ok(Matrix::from_fn(a.rows(), a.cols(), |i, j| a[(self.map[i], self.map[j])]))
            }
        }
    }
}

/// `P^T A P` for `side == Symmetric`, `P^T A` for rows, `A P` for columns.
pub fn apply_permutation(p: &Permutation, a: &Matrix, side: PermSide) -> Result<Matrix> {
    p.apply(a, side)
}
