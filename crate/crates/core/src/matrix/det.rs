//! Determinants by fraction-free (Bareiss) elimination.
//!
//! Each row is scaled to integers by the lcm of its denominators, the
//! integer determinant is computed with exact divisions only, and the row
//! scales are divided back out at the end.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{IndexSet, Matrix};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Determinant of a square integer matrix, consuming it.
pub(crate) fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// A matrix with every row scaled to integers, for repeated minor queries.
///
/// Row `r` is stored as `scale[r] * a[r]`, with `scale[r] > 0`, so signs of
/// minors are read directly off the integer determinants.
#[derive(Clone, Debug)]
pub struct IntegerRows {
    rows: Vec<Vec<BigInt>>,
    scale: Vec<BigInt>,
}

impl IntegerRows {
    pub fn new(a: &Matrix) -> Self {
        let mut rows = Vec::with_capacity(a.rows());
        let mut scale = Vec::with_capacity(a.rows());
        for r in 0..a.rows() {
            let row = a.row(r);
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            rows.push(
                row.iter()
                    .map(|x| x.numer() * (&lcm / x.denom()))
                    .collect::<Vec<_>>(),
            );
            scale.push(lcm);
        }
        IntegerRows { rows, scale }
    }

    fn integer_det(&self, rows: &[usize], cols: &[usize]) -> BigInt {
        let sub = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| self.rows[r][c].clone()).collect())
            .collect();
        bareiss(sub)
    }

    /// Exact minor for zero-based row/column positions (unchecked).
    pub(crate) fn minor_zero_based(&self, rows: &[usize], cols: &[usize]) -> Rational {
        let det = self.integer_det(rows, cols);
        if det.is_zero() {
            return Rational::zero();
        }
        let denom = rows
            .iter()
            .fold(BigInt::one(), |acc, &r| acc * &self.scale[r]);
        Rational::from_big(det, denom).expect("row scales are positive")
    }

    /// Exact minor for 1-based index sets (unchecked).
    pub fn minor(&self, rows: &IndexSet, cols: &IndexSet) -> Rational {
        self.minor_zero_based(&rows.zero_based(), &cols.zero_based())
    }
}

/// Exact determinant of the submatrix `A[rows | cols]`.
pub fn minor(a: &Matrix, rows: &IndexSet, cols: &IndexSet) -> Result<Rational> {
    if rows.len() != cols.len() {
        return Err(Error::ShapeMismatch(format!(
            "minor needs |rows| = |cols|, got {} and {}",
            rows.len(),
            cols.len()
        )));
    }
    if rows.is_empty() {
        return Err(Error::ShapeMismatch("minor of an empty index set".into()));
    }
    if rows.max().unwrap_or(0) > a.rows() || cols.max().unwrap_or(0) > a.cols() {
        return Err(Error::IndexOutOfRange(format!(
            "({rows}|{cols}) outside a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let r0 = rows.zero_based();
    let c0 = cols.zero_based();
    let sub = Matrix::from_fn(r0.len(), c0.len(), |i, j| a[(r0[i], c0[j])].clone());
    Ok(IntegerRows::new(&sub).minor_zero_based(
        &(0..r0.len()).collect::<Vec<_>>(),
        &(0..c0.len()).collect::<Vec<_>>(),
    ))
}

/// Determinant of a square matrix.
pub fn determinant(a: &Matrix) -> Result<Rational> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "determinant of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let all = IndexSet::range(1, a.rows());
    minor(a, &all, &all)
}
