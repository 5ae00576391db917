//! Seeded benchmark inputs shared by the criterion benches.

use oscillax::generate::{generate_oscillatory, random_matrix};
use oscillax::planar::{build_network, PlanarNetwork};
use oscillax::{compose, Matrix, SebFactorization};

pub const SEED: u64 = 0x05c1_11a7;

/// Dense integer matrix with entries in `-9..=9`.
pub fn dense(n: usize) -> Matrix {
    random_matrix(n, n, -9..=9, SEED ^ n as u64)
}

/// Oscillatory factorization together with the matrix it composes to.
pub fn oscillatory(n: usize) -> (SebFactorization, Matrix) {
    let f = generate_oscillatory(n, SEED ^ n as u64);
    let a = compose(&f);
    (f, a)
}

pub fn network(n: usize, copies: usize) -> PlanarNetwork {
    build_network(&oscillatory(n).0).repeat(copies)
}

#[cfg(test)]
mod tests {
    use super::*;
    use oscillax::classify::{is_oscillatory, OscillatoryMethod};

    #[test]
    fn fixtures_have_requested_shape() {
        assert_eq!(dense(5).rows(), 5);
        let (_, a) = oscillatory(4);
        assert!(is_oscillatory(&a, OscillatoryMethod::GantmacherKrein).unwrap());
        assert_eq!(network(4, 2).n(), 4);
    }
}
