//! Reference matrices with known factorizations and exponents.
//!
//! Used by the test suites, the `verify` runner and the benchmarks.

use crate::matrix::Matrix;
use crate::rational::parse_rational;

fn from_text(rows: &[&[&str]]) -> Matrix {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|x| parse_rational(x).expect("corpus literal")).collect())
        .collect();
    Matrix::from_rows(rows).expect("corpus shape")
}

/// 3x3 I-TN matrix whose factorization is
/// `L3(1) L2(2) L3(3) D(1,2,3) U3(2) U2(1) U3(1)`.
pub fn eq5_matrix() -> Matrix {
    Matrix::from_ints(&[[1, 1, 1], [2, 4, 8], [2, 10, 29]])
}

/// Basic oscillatory 4x4: `L3(1) L2(2) L4(3) U3(4) U4(5) U2(6)`.
pub fn basic_oscillatory_4x4() -> Matrix {
    Matrix::from_ints(&[[1, 6, 0, 0], [2, 13, 4, 20], [2, 13, 5, 25], [0, 0, 3, 16]])
}

/// I-TN 4x4 with a decimal entry; oscillatory, not TP.
pub fn a1() -> Matrix {
    from_text(&[
        &["3", "1", "0", "0"],
        &["1", "4", "1", "0.1"],
        &["0.1", "1", "5", "3"],
        &["0", "0", "2", "7"],
    ])
}

/// Oscillatory 4x4 with exponent 3 (lower part in Z1(2), transposed upper
/// part in Z1(3)).
pub fn exponent_example_4x4() -> Matrix {
    Matrix::from_ints(&[[1, 1, 2, 2], [2, 3, 7, 9], [6, 9, 22, 30], [6, 9, 22, 31]])
}

/// Oscillatory 5x5 with exponent 3 (lower part in Z2(3), transposed upper
/// part in Z2(4)).
pub fn exponent_example_5x5() -> Matrix {
    Matrix::from_ints(&[
        [1, 2, 0, 0, 0],
        [2, 5, 3, 0, 0],
        [0, 2, 7, 2, 6],
        [0, 8, 29, 11, 34],
        [0, 24, 89, 41, 131],
    ])
}

/// Two-member family with shared tags Z1(4) / Z1(3); exponent 2 each.
pub fn product_family() -> [Matrix; 2] {
    [
        from_text(&[
            &["2", "8", "16", "48"],
            &["8", "33", "67", "203"],
            &["8", "39.5", "89.5", "289.5"],
            &["20", "134.5", "350.5", "1219.5"],
        ]),
        Matrix::from_ints(&[[1, 2, 8, 24], [2, 6, 28, 88], [6, 23, 117, 376], [30, 145, 789, 2580]]),
    ]
}

/// Two members of exponent 3 whose products in either order are TP.
pub fn early_tp_pair() -> [Matrix; 2] {
    [
        Matrix::from_ints(&[[1, 1, 2, 6], [3, 4, 9, 28], [3, 4, 10, 32], [6, 8, 20, 65]]),
        Matrix::from_ints(&[[1, 3, 3, 6], [2, 7, 7, 14], [6, 23, 24, 48], [6, 25, 27, 55]]),
    ]
}

/// 3x3 oscillatory matrix whose exponent is bounded by 2 with the bound
/// attained.
pub fn bound_example_3x3() -> Matrix {
    Matrix::from_ints(&[[1, 1, 4], [1, 2, 10], [0, 2, 13]])
}

/// Tridiagonal `n x n` matrix with 2 on the diagonal and 1 off it.
pub fn jacobi(n: usize) -> Matrix {
    Matrix::from_fn(n, n, |r, c| match r.abs_diff(c) {
        0 => 2.into(),
        1 => 1.into(),
        _ => 0.into(),
    })
}
