//! Dense complex matrices in row-major order.
//!
//! This is deliberately a small, allocation-friendly desk-scale type: every
//! operator handled by this crate is at most a few dozen rows, so clarity
//! wins over blocking or SIMD tricks.

use crate::{Complex64, Error};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(rows * cols, data.len(), "entry count must be rows*cols");
        ComplexMatrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = ComplexMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from nested rows of `(re, im)` pairs; handy in tests.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        assert!(r > 0);
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c));
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        ComplexMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Real diagonal matrix.
    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = Complex64::new(e, 0.0);
        }
        m
    }

    pub fn scalar(value: Complex64) -> Self {
        ComplexMatrix::from_vec(1, 1, vec![value])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn require_square(&self) -> Result<(), Error> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn require_same_shape(&self, other: &Self, context: &'static str) -> Result<(), Error> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                context,
                got_rows: other.rows,
                got_cols: other.cols,
                want_rows: self.rows,
                want_cols: self.cols,
            })
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let data = self.data.iter().map(|z| z * s).collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Hermitian part `(T + T*)/2`.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        let adj = self.adjoint();
        (self + &adj).scale_re(0.5)
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Apply to a vector (given as a column slice).
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, x.len());
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self[(i, j)] * x[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm of the difference.
    pub fn diff_norm(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Scale-aware equality: `|X - Y|_F <= atol * (1 + |X|_F + |Y|_F)`.
    pub fn close_to(&self, other: &Self, atol: f64) -> bool {
        self.diff_norm(other) <= atol * (1.0 + self.frobenius_norm() + other.frobenius_norm())
    }

    /// Residual of Hermitian-ness, `|T - T*|_F`.
    pub fn hermitian_residual(&self) -> f64 {
        assert!(self.is_square());
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                acc += d.norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Complex64]) {
        assert_eq!(col.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = col[i];
        }
    }

    /// Copy of columns `lo..hi`.
    pub fn columns(&self, lo: usize, hi: usize) -> Self {
        assert!(lo < hi && hi <= self.cols);
        ComplexMatrix::from_fn(self.rows, hi - lo, |i, j| self[(i, lo + j)])
    }

    /// Horizontal concatenation.
    pub fn hstack(blocks: &[&ComplexMatrix]) -> Self {
        assert!(!blocks.is_empty());
        let rows = blocks[0].rows;
        assert!(blocks.iter().all(|b| b.rows == rows));
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = ComplexMatrix::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            out.set_block(0, off, b);
            off += b.cols;
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(blocks: &[&ComplexMatrix]) -> Self {
        assert!(!blocks.is_empty());
        let cols = blocks[0].cols;
        assert!(blocks.iter().all(|b| b.cols == cols));
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = ComplexMatrix::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            out.set_block(off, 0, b);
            off += b.rows;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &ComplexMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> ComplexMatrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        ComplexMatrix::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_re(-1.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Modified Gram-Schmidt with one reorthogonalization pass. Columns whose
/// residual drops below `drop_tol` times their original norm are discarded,
/// so the result always has orthonormal columns (or no columns at all, in
/// which case `None`).
pub fn orthonormalize_columns(m: &ComplexMatrix, drop_tol: f64) -> Option<ComplexMatrix> {
    let rows = m.rows();
    let mut kept: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..m.cols() {
        let mut v = m.column(j);
        let orig = vec_norm(&v);
        if orig == 0.0 {
            continue;
        }
        for _pass in 0..2 {
            for q in &kept {
                let coef = vec_dot(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= coef * qi;
                }
            }
        }
        let n = vec_norm(&v);
        if n > drop_tol * orig.max(1.0) {
            let inv = 1.0 / n;
            for vi in &mut v {
                *vi *= inv;
            }
            kept.push(v);
        }
    }
    if kept.is_empty() {
        return None;
    }
    let mut out = ComplexMatrix::zeros(rows, kept.len());
    for (j, col) in kept.iter().enumerate() {
        out.set_column(j, col);
    }
    Some(out)
}

pub(crate) fn vec_dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn vec_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
