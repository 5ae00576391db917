//! Dense matrices over [`Rational`], minors, products and compounds.

mod compound;
mod det;
mod index;
mod io;

use std::fmt;
use std::ops::{Index, IndexMut};

pub use compound::{
    cauchy_binet_check, multiplicative_compound, multiplicative_compound_with, CompoundMatrix,
};
pub use det::{determinant, minor, IntegerRows};
pub use index::IndexSet;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Caps for operations that enumerate every minor of a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest dimension accepted by exhaustive minor scans.
    pub max_scan_dim: usize,
}

impl Limits {
    pub const DEFAULT_MAX_SCAN_DIM: usize = 8;

    pub fn check(&self, dim: usize) -> Result<()> {
        if dim > self.max_scan_dim {
            Err(Error::FeasibilityExceeded {
                dim,
                cap: self.max_scan_dim,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_scan_dim: Self::DEFAULT_MAX_SCAN_DIM,
        }
    }
}

/// A dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch(format!("empty {rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != m) {
            return Err(Error::ShapeMismatch(format!(
                "row {} has {} entries, expected {m}",
                bad + 1,
                rows[bad].len()
            )));
        }
        Matrix::new(n, m, rows.into_iter().flatten().collect())
    }

    /// Integer literal matrix; panics on an empty input.
    pub fn from_ints<const C: usize>(rows: &[[i64; C]]) -> Self {
        Matrix::from_fn(rows.len(), C, |r, c| Rational::from(rows[r][c]))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| Rational::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| {
            if r == c {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        Matrix::from_fn(d.len(), d.len(), |r, c| {
            if r == c {
                d[r].clone()
            } else {
                Rational::zero()
            }
        })
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

    /// Side length of a square matrix.
    pub fn order(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::ShapeMismatch(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    /// Entry at 1-based position `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self[(i - 1, j - 1)]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// `row[target] += factor * row[source]`.
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let delta = factor * &self[(source, c)];
            self[(target, c)] += delta;
        }
    }

    /// `col[target] += factor * col[source]`.
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let delta = factor * &self[(r, source)];
            self[(r, target)] += delta;
        }
    }

    pub(crate) fn scale_col(&mut self, col: usize, factor: &Rational) {
        for r in 0..self.rows {
            self[(r, col)] *= factor;
        }
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        mat_mul(self, rhs)
    }

    pub fn pow(&self, k: u32) -> Result<Matrix> {
        mat_pow(self, k)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;

    /// Zero-based `(row, col)` access.
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for r in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|c| format!("{:>width$}", cells[r * self.cols + c]))
                .collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{}\n{}", self.rows, self.cols, self)
    }
}

/// Exact product `A * B`.
pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols != b.rows {
        return Err(Error::ShapeMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = Matrix::zeros(a.rows, b.cols);
    for r in 0..a.rows {
        for k in 0..a.cols {
            let x = &a[(r, k)];
            if x.is_zero() {
                continue;
            }
            for c in 0..b.cols {
                let y = &b[(k, c)];
                if !y.is_zero() {
                    out[(r, c)] += x * y;
                }
            }
        }
    }
    Ok(out)
}

/// Exact power `A^k` for `k >= 1`.
pub fn mat_pow(a: &Matrix, k: u32) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "power of a non-square {}x{} matrix",
            a.rows, a.cols
        )));
    }
    if k == 0 {
        return Err(Error::ParamOutOfRange("matrix power must be at least 1".into()));
    }
    let mut result = a.clone();
    for _ in 1..k {
        result = mat_mul(&result, a)?;
    }
    Ok(result)
}
