//! Exact analysis of totally nonnegative and oscillatory matrices.
//!
//! Everything is computed over exact rationals: minors, bidiagonal
//! factorizations by Neville elimination, planar-network path families and
//! exponents of oscillatory matrices, both by brute force and by closed-form
//! prediction from the factorization's positivity pattern.

pub mod classify;
pub mod corpus;
pub mod error;
pub mod exponent;
pub mod generate;
pub mod matrix;
pub mod planar;
pub mod rational;
pub mod seb;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{
    cauchy_binet_check, determinant, mat_mul, mat_pow, minor, multiplicative_compound,
    CompoundMatrix, IndexSet, Limits, Matrix,
};
pub use rational::{parse_rational, Rational};
pub use seb::{compose, neville_factorize, EbFactor, EbKind, SebFactorization};
