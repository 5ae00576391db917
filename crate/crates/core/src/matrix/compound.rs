use super::{mat_mul, minor, IndexSet, IntegerRows, Limits, Matrix};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// The `p`-th multiplicative compound of an `n x n` matrix: all `p x p`
/// minors, rows and columns indexed by `p`-subsets in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompoundMatrix {
    pub order: usize,
    pub base_n: usize,
    pub data: Matrix,
}

impl CompoundMatrix {
    /// The index sets labelling rows (and columns), in storage order.
    pub fn index_sets(&self) -> Vec<IndexSet> {
        IndexSet::all(self.base_n, self.order).collect()
    }
}

pub fn multiplicative_compound(a: &Matrix, p: usize) -> Result<CompoundMatrix> {
    multiplicative_compound_with(a, p, &Limits::default())
}

pub fn multiplicative_compound_with(a: &Matrix, p: usize, limits: &Limits) -> Result<CompoundMatrix> {
    let n = a.order()?;
    if p == 0 || p > n {
        return Err(Error::OrderOutOfRange { order: p, n });
    }
    limits.check(n)?;
    let sets: Vec<IndexSet> = IndexSet::all(n, p).collect();
    let engine = IntegerRows::new(a);
    let size = sets.len();
    let data = Matrix::from_fn(size, size, |r, c| engine.minor(&sets[r], &sets[c]));
    Ok(CompoundMatrix {
        order: p,
        base_n: n,
        data,
    })
}

/// Checks `(AB)(alpha|beta) = sum over gamma of A(alpha|gamma) B(gamma|beta)`
/// by computing both sides independently.
pub fn cauchy_binet_check(a: &Matrix, b: &Matrix, alpha: &IndexSet, beta: &IndexSet) -> Result<bool> {
    let product = mat_mul(a, b)?;
    let k = alpha.len();
    if beta.len() != k || k == 0 {
        return Err(Error::ShapeMismatch(format!(
            "index sets {alpha} and {beta} must be non-empty and equally sized"
        )));
    }
    if k > a.cols() {
        return Err(Error::ShapeMismatch(format!(
            "order {k} exceeds inner dimension {}",
            a.cols()
        )));
    }
    let lhs = minor(&product, alpha, beta)?;
    let mut rhs = Rational::zero();
    for gamma in IndexSet::all(a.cols(), k) {
        let left = minor(a, alpha, &gamma)?;
        if left.is_zero() {
            continue;
        }
        rhs += left * minor(b, &gamma, beta)?;
    }
    Ok(lhs == rhs)
}
