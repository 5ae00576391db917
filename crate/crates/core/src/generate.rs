//! Seeded instance generators.
//!
//! Every generator takes a `u64` seed and is deterministic in it. Multipliers
//! and diagonal entries are integers drawn from `1..=9`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::Rational;
use crate::seb::{lower_slot_indices, slot_count, upper_slot_indices, x_offset, SebFactorization};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn draw(rng: &mut impl Rng) -> Rational {
    Rational::from(rng.gen_range(1i64..=9))
}

fn check_s(n: usize, s: usize) -> Result<()> {
    if n < 2 || s < 2 || s > n {
        return Err(Error::ParamOutOfRange(format!(
            "class parameter s = {s} must lie in [2, {n}]"
        )));
    }
    Ok(())
}

/// Which factors of `W_{s-1}` are present in a `Z2(s)` lower part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsiChoice {
    Random,
    /// Indices of the present `L_j`; must contain `s-1`, lie in `[s-1, n]`
    /// and leave at least one index out.
    Present(Vec<usize>),
}

impl PsiChoice {
    /// Parses `"random"` or a factor list such as `"L5L3L2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.eq_ignore_ascii_case("random") {
            return Ok(PsiChoice::Random);
        }
        let mut present = Vec::new();
        for part in text.split('L').skip(1) {
            let i = part
                .parse()
                .map_err(|_| Error::InvalidPsiPattern(format!("cannot read {text:?}")))?;
            present.push(i);
        }
        if present.is_empty() || !text.starts_with('L') {
            return Err(Error::InvalidPsiPattern(format!("cannot read {text:?}")));
        }
        present.sort_unstable();
        present.dedup();
        Ok(PsiChoice::Present(present))
    }
}

/// Every valid presence set for `Psi_i` in dimension `n`, each sorted.
pub fn psi_patterns(n: usize, i: usize) -> Vec<Vec<usize>> {
    let others: Vec<usize> = (i + 1..=n).collect();
    let full = (1usize << others.len()) - 1;
    (0..full)
        .map(|mask| {
            let mut set = vec![i];
            set.extend(
                others
                    .iter()
                    .enumerate()
                    .filter(|&(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &j)| j),
            );
            set
        })
        .collect()
}

fn lower_only(n: usize, l: Vec<Rational>) -> SebFactorization {
    SebFactorization::new(
        n,
        l,
        vec![Rational::one(); n],
        vec![Rational::zero(); slot_count(n)],
    )
    .expect("generated factorization is well formed")
}

/// Writes positive values into the slots of `W_i` whose `L` index is in `present`.
fn fill_bracket(l: &mut [Rational], n: usize, i: usize, present: impl Fn(usize) -> bool, rng: &mut impl Rng) {
    let start = x_offset(n, i) - 1;
    for (p, j) in (i..=n).rev().enumerate() {
        if present(j) {
            l[start + p] = draw(rng);
        }
    }
}

/// Lower part `W_2 .. W_s` with every multiplier positive.
pub fn generate_z1(n: usize, s: usize, seed: u64) -> Result<SebFactorization> {
    check_s(n, s)?;
    let mut rng = rng(seed);
    let mut l = vec![Rational::zero(); slot_count(n)];
    for i in 2..=s {
        fill_bracket(&mut l, n, i, |_| true, &mut rng);
    }
    Ok(lower_only(n, l))
}

/// Lower part `L_2 .. L_{s-2} P W_s .. W_n` with `P` in `Psi_{s-1}`.
///
/// For `s = 2` this is the full lower part and only `PsiChoice::Random` is
/// accepted.
pub fn generate_z2(n: usize, s: usize, psi: &PsiChoice, seed: u64) -> Result<SebFactorization> {
    check_s(n, s)?;
    let mut rng = rng(seed);
    let mut l = vec![Rational::zero(); slot_count(n)];
    if s == 2 {
        if let PsiChoice::Present(p) = psi {
            return Err(Error::InvalidPsiPattern(format!(
                "Z2(2) has no Psi factor, got {p:?}"
            )));
        }
        for i in 2..=n {
            fill_bracket(&mut l, n, i, |_| true, &mut rng);
        }
        return Ok(lower_only(n, l));
    }
    let present = match psi {
        PsiChoice::Present(p) => {
            let valid = psi_patterns(n, s - 1);
            let mut sorted = p.clone();
            sorted.sort_unstable();
            if !valid.contains(&sorted) {
                return Err(Error::InvalidPsiPattern(format!(
                    "{p:?} is not a Psi_{} pattern for n = {n}",
                    s - 1
                )));
            }
            sorted
        }
        PsiChoice::Random => {
            let valid = psi_patterns(n, s - 1);
            valid[rng.gen_range(0..valid.len())].clone()
        }
    };
    for i in 2..=s - 2 {
        fill_bracket(&mut l, n, i, |j| j == i, &mut rng);
    }
    fill_bracket(&mut l, n, s - 1, |j| present.contains(&j), &mut rng);
    for i in s..=n {
        fill_bracket(&mut l, n, i, |_| true, &mut rng);
    }
    Ok(lower_only(n, l))
}

/// `L D U` from a lower part, a diagonal, and the lower part of `U^T`.
pub fn pair(l_part: &SebFactorization, d: Vec<Rational>, ut_part: &SebFactorization) -> Result<SebFactorization> {
    if l_part.n() != ut_part.n() {
        return Err(Error::ShapeMismatch(format!(
            "lower parts of dimension {} and {}",
            l_part.n(),
            ut_part.n()
        )));
    }
    SebFactorization::new(
        l_part.n(),
        l_part.l().to_vec(),
        d,
        ut_part.l().iter().rev().cloned().collect(),
    )
}

pub fn random_diagonal(n: usize, rng: &mut impl Rng) -> Vec<Rational> {
    (0..n).map(|_| draw(rng)).collect()
}

/// An I-TN factorization where each multiplier is zero with probability
/// `zero_probability`.
pub fn random_factorization(n: usize, zero_probability: f64, seed: u64) -> SebFactorization {
    let mut rng = rng(seed);
    let k = slot_count(n);
    let side = |rng: &mut ChaCha8Rng| -> Vec<Rational> {
        (0..k)
            .map(|_| if rng.gen_bool(zero_probability) { Rational::zero() } else { draw(rng) })
            .collect()
    };
    let l = side(&mut rng);
    let u = side(&mut rng);
    let d = random_diagonal(n, &mut rng);
    SebFactorization::new(n, l, d, u).expect("generated factorization is well formed")
}

/// An oscillatory factorization: every `L_i` and `U_i` family has at least
/// one positive multiplier, other slots are positive with probability 1/2.
pub fn generate_oscillatory(n: usize, seed: u64) -> SebFactorization {
    let mut rng = rng(seed);
    let side = |slots: Vec<usize>, rng: &mut ChaCha8Rng| -> Vec<Rational> {
        let mut out: Vec<Rational> = slots
            .iter()
            .map(|_| if rng.gen_bool(0.5) { draw(rng) } else { Rational::zero() })
            .collect();
        for i in 2..=n {
            let family: Vec<usize> = (0..slots.len()).filter(|&p| slots[p] == i).collect();
            if family.iter().all(|&p| out[p].is_zero()) {
                out[family[rng.gen_range(0..family.len())]] = draw(rng);
            }
        }
        out
    };
    let l = side(lower_slot_indices(n), &mut rng);
    let u = side(upper_slot_indices(n), &mut rng);
    let d = random_diagonal(n, &mut rng);
    SebFactorization::new(n, l, d, u).expect("generated factorization is well formed")
}

/// Dense matrix with integer entries drawn from `range`.
pub fn random_matrix(rows: usize, cols: usize, range: std::ops::RangeInclusive<i64>, seed: u64) -> Matrix {
    let mut rng = rng(seed);
    Matrix::from_fn(rows, cols, |_, _| Rational::from(rng.gen_range(range.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seb::FactorizationClass;

    fn support(f: &SebFactorization) -> Vec<bool> {
        f.l().iter().map(Rational::is_positive).collect()
    }

    #[test]
    fn z1_shapes() {
        let full = generate_z1(5, 5, 1).unwrap();
        assert!(full.l().iter().all(Rational::is_positive));
        let two = generate_z1(4, 2, 1).unwrap();
        assert_eq!(support(&two), vec![true, true, true, false, false, false]);
        assert!(two.u().iter().all(Rational::is_zero));
        assert_eq!(generate_z1(4, 2, 7).unwrap(), generate_z1(4, 2, 7).unwrap());
        assert!(matches!(generate_z1(4, 5, 0), Err(Error::ParamOutOfRange(_))));
        assert!(matches!(generate_z1(4, 1, 0), Err(Error::ParamOutOfRange(_))));
    }

    #[test]
    fn z2_shapes() {
        // s = n with P = L_{n-1}: the chain L_2 L_3 .. L_n of a Jacobi matrix.
        let f = generate_z2(5, 5, &PsiChoice::Present(vec![4]), 3).unwrap();
        let expected = [false, false, false, true, false, false, true, false, true, true];
        assert_eq!(support(&f), expected);
        let a = f.matrix();
        for r in 0..5 {
            for c in 0..5 {
                assert_eq!(a[(r, c)].is_zero(), !(r == c || r == c + 1), "({r}, {c})");
            }
        }

        let g = generate_z2(5, 3, &PsiChoice::Present(vec![2, 3, 5]), 3).unwrap();
        let expected = [true, false, true, true, true, true, true, true, true, true];
        assert_eq!(support(&g), expected);

        let z22 = generate_z2(4, 2, &PsiChoice::Random, 0).unwrap();
        assert!(z22.l().iter().all(Rational::is_positive));
    }

    #[test]
    fn z2_rejects_bad_patterns() {
        for bad in [vec![3], vec![2, 3, 4, 5], vec![1, 2], vec![2, 6]] {
            assert!(matches!(
                generate_z2(5, 3, &PsiChoice::Present(bad), 0),
                Err(Error::InvalidPsiPattern(_))
            ));
        }
        assert!(matches!(
            generate_z2(5, 2, &PsiChoice::Present(vec![1]), 0),
            Err(Error::InvalidPsiPattern(_))
        ));
    }

    #[test]
    fn psi_pattern_enumeration() {
        assert_eq!(psi_patterns(5, 2).len(), 7);
        assert_eq!(psi_patterns(5, 3), vec![vec![3], vec![3, 4], vec![3, 5]]);
        assert_eq!(psi_patterns(5, 4), vec![vec![4]]);
        assert!(psi_patterns(5, 2).contains(&vec![2, 3, 5]));
    }

    #[test]
    fn psi_parsing() {
        assert_eq!(PsiChoice::parse("L5L3L2").unwrap(), PsiChoice::Present(vec![2, 3, 5]));
        assert_eq!(PsiChoice::parse("random").unwrap(), PsiChoice::Random);
        assert!(PsiChoice::parse("L5x").is_err());
        assert!(PsiChoice::parse("5").is_err());
        assert!(PsiChoice::parse("").is_err());
    }

    #[test]
    fn oscillatory_generator_covers_every_family() {
        for seed in 0..50 {
            let f = generate_oscillatory(5, seed);
            assert_ne!(f.classify(), FactorizationClass::ItnOnly);
        }
    }
}
