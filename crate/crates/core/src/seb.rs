//! Elementary bidiagonal (EB) matrices and the successive EB factorization
//!
//! ```text
//! A = [L_n .. L_2][L_n .. L_3] .. [L_n] D [U_n][U_{n-1} U_n] .. [U_2 .. U_n]
//! ```
//!
//! of an invertible totally nonnegative matrix, computed by Neville
//! elimination. Both multiplier vectors are stored in the left-to-right
//! order in which the factors are written above, so `l[0]` belongs to the
//! leading `L_n` and `u[0]` to the lone `U_n` right after `D`.
//!
//! The bracket `[L_n .. L_i]` is `W_i` and `[U_i .. U_n]` is `Q_i`, giving
//! the grouped form `W_2 .. W_n D Q_n .. Q_2`.

use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::{parse_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EbKind {
    Lower,
    Upper,
}

/// `L_i(q) = I + q E_{i,i-1}` or its transpose `U_i(q)`, as an `n x n` matrix.
pub fn eb_matrix(kind: EbKind, i: usize, q: &Rational, n: usize) -> Result<Matrix> {
    check_index(i, n)?;
    let mut m = Matrix::identity(n);
    match kind {
        EbKind::Lower => m[(i - 1, i - 2)] = q.clone(),
        EbKind::Upper => m[(i - 2, i - 1)] = q.clone(),
    }
    Ok(m)
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i < 2 || i > n {
        return Err(Error::IndexOutOfRange(format!(
            "EB index {i} outside [2, {n}]"
        )));
    }
    Ok(())
}

/// One factor of an EB product.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EbFactor {
    Lower { i: usize, q: Rational },
    Upper { i: usize, q: Rational },
    Diagonal(Vec<Rational>),
}

impl EbFactor {
    pub fn matrix(&self, n: usize) -> Result<Matrix> {
        match self {
            EbFactor::Lower { i, q } => eb_matrix(EbKind::Lower, *i, q, n),
            EbFactor::Upper { i, q } => eb_matrix(EbKind::Upper, *i, q, n),
            EbFactor::Diagonal(d) if d.len() == n => Ok(Matrix::diagonal(d)),
            EbFactor::Diagonal(d) => Err(Error::ShapeMismatch(format!(
                "diagonal of length {} in dimension {n}",
                d.len()
            ))),
        }
    }
}

impl fmt::Display for EbFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EbFactor::Lower { i, q } => write!(f, "L{i}({q})"),
            EbFactor::Upper { i, q } => write!(f, "U{i}({q})"),
            EbFactor::Diagonal(d) => write!(f, "D({})", join(d)),
        }
    }
}

impl Serialize for EbFactor {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn join(values: &[Rational]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Number of multipliers on each side, `n(n-1)/2`.
pub fn slot_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// The `L` index sitting in each position of the flat lower vector.
pub fn lower_slot_indices(n: usize) -> Vec<usize> {
    (2..=n).flat_map(|i| (i..=n).rev()).collect()
}

/// The `U` index sitting in each position of the flat upper vector.
pub fn upper_slot_indices(n: usize) -> Vec<usize> {
    (2..=n).rev().flat_map(|i| i..=n).collect()
}

/// 1-based start `x_i = (i-2)n - (i-3)i/2` of `W_i` in the flat lower vector.
pub fn x_offset(n: usize, i: usize) -> usize {
    let (n, i) = (n as i64, i as i64);
    ((i - 2) * n - (i - 3) * i / 2) as usize
}

/// 0-based start of `Q_i` in the flat upper vector.
fn q_offset(n: usize, i: usize) -> usize {
    (n - i) * (n - i + 1) / 2
}

/// A successive EB factorization `A = L D U`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FactorizationDoc", into = "FactorizationDoc")]
pub struct SebFactorization {
    n: usize,
    l: Vec<Rational>,
    d: Vec<Rational>,
    u: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorizationDoc {
    n: usize,
    l: Vec<Rational>,
    d: Vec<Rational>,
    u: Vec<Rational>,
}

impl TryFrom<FactorizationDoc> for SebFactorization {
    type Error = Error;

    fn try_from(doc: FactorizationDoc) -> Result<Self> {
        SebFactorization::new(doc.n, doc.l, doc.d, doc.u)
    }
}

impl From<SebFactorization> for FactorizationDoc {
    fn from(f: SebFactorization) -> Self {
        FactorizationDoc {
            n: f.n,
            l: f.l,
            d: f.d,
            u: f.u,
        }
    }
}

/// Coarse class read off the multiplier signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorizationClass {
    Tp,
    BasicOscillatory,
    Oscillatory,
    ItnOnly,
}

impl SebFactorization {
    pub fn new(n: usize, l: Vec<Rational>, d: Vec<Rational>, u: Vec<Rational>) -> Result<Self> {
        if n == 0 {
            return Err(Error::MalformedFactorization("dimension 0".into()));
        }
        let k = slot_count(n);
        if l.len() != k || u.len() != k || d.len() != n {
            return Err(Error::MalformedFactorization(format!(
                "dimension {n} needs {k} lower, {n} diagonal and {k} upper entries; got {}, {}, {}",
                l.len(),
                d.len(),
                u.len()
            )));
        }
        if let Some(x) = l.iter().chain(&u).find(|x| x.is_negative()) {
            return Err(Error::MalformedFactorization(format!("negative multiplier {x}")));
        }
        if let Some(x) = d.iter().find(|x| !x.is_positive()) {
            return Err(Error::MalformedFactorization(format!("nonpositive diagonal entry {x}")));
        }
        Ok(SebFactorization { n, l, d, u })
    }

    pub fn identity(n: usize) -> Self {
        SebFactorization::new(
            n,
            vec![Rational::zero(); slot_count(n)],
            vec![Rational::one(); n],
            vec![Rational::zero(); slot_count(n)],
        )
        .expect("identity factorization")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> &[Rational] {
        &self.l
    }

    pub fn d(&self) -> &[Rational] {
        &self.d
    }

    pub fn u(&self) -> &[Rational] {
        &self.u
    }

    pub fn with_diagonal(&self, d: Vec<Rational>) -> Result<Self> {
        SebFactorization::new(self.n, self.l.clone(), d, self.u.clone())
    }

    /// `L` alone (`D = I`, no upper factors).
    pub fn lower_part(&self) -> Self {
        SebFactorization {
            n: self.n,
            l: self.l.clone(),
            d: vec![Rational::one(); self.n],
            u: vec![Rational::zero(); self.u.len()],
        }
    }

    /// `U` alone (`D = I`, no lower factors).
    pub fn upper_part(&self) -> Self {
        SebFactorization {
            n: self.n,
            l: vec![Rational::zero(); self.l.len()],
            d: vec![Rational::one(); self.n],
            u: self.u.clone(),
        }
    }

    /// Factorization of the transposed matrix.
    pub fn transpose(&self) -> Self {
        SebFactorization {
            n: self.n,
            l: self.u.iter().rev().cloned().collect(),
            d: self.d.clone(),
            u: self.l.iter().rev().cloned().collect(),
        }
    }

    /// All factors in product order; zero multipliers are skipped and `D`
    /// is always present.
    pub fn factors(&self) -> Vec<EbFactor> {
        let mut out = Vec::new();
        for (i, q) in lower_slot_indices(self.n).into_iter().zip(&self.l) {
            if !q.is_zero() {
                out.push(EbFactor::Lower { i, q: q.clone() });
            }
        }
        out.push(EbFactor::Diagonal(self.d.clone()));
        for (i, q) in upper_slot_indices(self.n).into_iter().zip(&self.u) {
            if !q.is_zero() {
                out.push(EbFactor::Upper { i, q: q.clone() });
            }
        }
        out
    }

    /// Whether Neville elimination of the composed matrix returns exactly
    /// these multipliers.
    ///
    /// That holds iff inside every `W_i` a zero multiplier on `L_j` forces
    /// zeros on all `L_h` with `h > j`, and likewise for `U_j` in every
    /// `Q_i`. Other patterns compose to the same matrix as a canonical one.
    pub fn is_canonical(&self) -> bool {
        let n = self.n;
        (2..=n).all(|i| {
            let w = &self.l[x_offset(n, i) - 1..x_offset(n, i) - 1 + n - i + 1];
            let q = &self.u[q_offset(n, i)..q_offset(n, i) + n - i + 1];
            // W_i lists L_n first, Q_i lists U_n last.
            zeros_then_positive(w.iter()) && zeros_then_positive(q.iter().rev())
        })
    }

    pub fn pack(&self) -> PackedParams {
        let n = self.n;
        let offsets: Vec<usize> = (2..=n).map(|i| x_offset(n, i)).collect();
        let l = (2..=n)
            .map(|i| {
                let start = x_offset(n, i) - 1;
                self.l[start..start + n - i + 1].to_vec()
            })
            .collect();
        let u = (2..=n)
            .map(|i| {
                let start = q_offset(n, i);
                self.u[start..start + n - i + 1].to_vec()
            })
            .collect();
        PackedParams { n, offsets, l, u }
    }

    /// Grouped `W_2 .. W_n D Q_n .. Q_2` view; all-zero groups are dropped.
    pub fn wq_form(&self) -> WqForm {
        let packed = self.pack();
        let nonzero = |v: &Vec<Rational>| v.iter().any(|x| !x.is_zero());
        WqForm {
            n: self.n,
            w: (2..=self.n)
                .filter(|&i| nonzero(packed.l_vector(i)))
                .map(|i| (i, packed.l_vector(i).clone()))
                .collect(),
            d: self.d.clone(),
            q: (2..=self.n)
                .rev()
                .filter(|&i| nonzero(packed.u_vector(i)))
                .map(|i| (i, packed.u_vector(i).clone()))
                .collect(),
        }
    }

    pub fn classify(&self) -> FactorizationClass {
        classify_factorization(self)
    }

    /// Multiplier of each `L_i` family (`i = 2..=n`), in slot order.
    pub fn lower_family(&self, i: usize) -> Vec<&Rational> {
        lower_slot_indices(self.n)
            .into_iter()
            .zip(&self.l)
            .filter(|&(j, _)| j == i)
            .map(|(_, q)| q)
            .collect()
    }

    pub fn upper_family(&self, i: usize) -> Vec<&Rational> {
        upper_slot_indices(self.n)
            .into_iter()
            .zip(&self.u)
            .filter(|&(j, _)| j == i)
            .map(|(_, q)| q)
            .collect()
    }

    pub fn matrix(&self) -> Matrix {
        compose(self)
    }

    /// Parses the text form, e.g. `L3(1) L2(2) L3(3) D(1,2,3) U3(2) U2(1) U3(1)`,
    /// and returns the canonical factorization of the product.
    ///
    /// The dimension comes from `D` when present, otherwise from `n`.
    /// Factors may appear in any order that commutes into slot order.
    pub fn from_text(text: &str, n: Option<usize>) -> Result<Self> {
        static TOKEN: OnceLock<Regex> = OnceLock::new();
        let token = TOKEN.get_or_init(|| Regex::new(r"^([LUD])(\d*)\(([^()]*)\)$").unwrap());
        let mut factors = Vec::new();
        for word in text.split_whitespace() {
            let caps = token
                .captures(word)
                .ok_or_else(|| Error::MalformedFactorization(format!("bad factor {word:?}")))?;
            let body = &caps[3];
            match (&caps[1], &caps[2]) {
                ("D", "") => {
                    let d = body
                        .split(',')
                        .map(|x| parse_rational(x.trim()))
                        .collect::<Result<Vec<_>>>()?;
                    factors.push(EbFactor::Diagonal(d));
                }
                (kind @ ("L" | "U"), digits) if !digits.is_empty() => {
                    let i: usize = digits
                        .parse()
                        .map_err(|_| Error::MalformedFactorization(format!("bad index in {word:?}")))?;
                    let q = parse_rational(body.trim())?;
                    factors.push(if kind == "L" {
                        EbFactor::Lower { i, q }
                    } else {
                        EbFactor::Upper { i, q }
                    });
                }
                _ => return Err(Error::MalformedFactorization(format!("bad factor {word:?}"))),
            }
        }
        let from_d = factors.iter().find_map(|f| match f {
            EbFactor::Diagonal(d) => Some(d.len()),
            _ => None,
        });
        let n = match (from_d, n) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::MalformedFactorization(format!(
                    "diagonal has {a} entries but dimension {b} was requested"
                )))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => {
                return Err(Error::MalformedFactorization(
                    "dimension unknown: no D factor and none given".into(),
                ))
            }
        };
        Ok(normalize_commutation(n, &factors)?.canonicalize())
    }

    /// The factorization Neville elimination assigns to the same matrix.
    pub fn canonicalize(&self) -> Self {
        if self.is_canonical() {
            return self.clone();
        }
        neville_factorize(&compose(self)).expect("products of EB factors are invertible TN")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("factorization serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: FactorizationDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        SebFactorization::try_from(doc)
    }
}

impl fmt::Display for SebFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.factors().iter().map(ToString::to_string).collect();
        f.write_str(&words.join(" "))
    }
}

fn zeros_then_positive<'a>(mut values: impl Iterator<Item = &'a Rational>) -> bool {
    let mut seen_positive = false;
    values.all(|x| {
        seen_positive |= !x.is_zero();
        !(seen_positive && x.is_zero())
    })
}

/// The multiplier vectors grouped per `W_i` and `Q_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PackedParams {
    pub n: usize,
    /// `x_2, ..., x_n` (1-based).
    pub offsets: Vec<usize>,
    /// `l^2, ..., l^n`; `l^i` lists the multipliers of `L_n, ..., L_i`.
    pub l: Vec<Vec<Rational>>,
    /// `u^2, ..., u^n`; `u^i` lists the multipliers of `U_i, ..., U_n`.
    pub u: Vec<Vec<Rational>>,
}

impl PackedParams {
    pub fn l_vector(&self, i: usize) -> &Vec<Rational> {
        &self.l[i - 2]
    }

    pub fn u_vector(&self, i: usize) -> &Vec<Rational> {
        &self.u[i - 2]
    }
}

/// `W_2 .. W_n D Q_n .. Q_2` with all-zero groups omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WqForm {
    pub n: usize,
    pub w: Vec<(usize, Vec<Rational>)>,
    pub d: Vec<Rational>,
    pub q: Vec<(usize, Vec<Rational>)>,
}

impl WqForm {
    /// Product of the grouped factors, multiplied out as dense matrices.
    pub fn matrix(&self) -> Matrix {
        let n = self.n;
        let mut factors = Vec::new();
        for (i, v) in &self.w {
            for (j, q) in (*i..=n).rev().zip(v) {
                factors.push(EbFactor::Lower { i: j, q: q.clone() });
            }
        }
        factors.push(EbFactor::Diagonal(self.d.clone()));
        for (i, v) in &self.q {
            for (j, q) in (*i..=n).zip(v) {
                factors.push(EbFactor::Upper { i: j, q: q.clone() });
            }
        }
        factors.iter().fold(Matrix::identity(n), |acc, f| {
            acc.mul(&f.matrix(n).expect("well-formed group")).expect("square")
        })
    }
}

impl fmt::Display for WqForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut words: Vec<String> = self.w.iter().map(|(i, v)| format!("W{i}({})", join(v))).collect();
        words.push(format!("D({})", join(&self.d)));
        words.extend(self.q.iter().map(|(i, v)| format!("Q{i}({})", join(v))));
        f.write_str(&words.join(" "))
    }
}

/// One Neville pass: clears everything below the diagonal using the row
/// directly above as pivot, returning the multipliers in `L` slot order.
fn neville_pass(m: &mut Matrix, side: &str) -> Result<Vec<Rational>> {
    let n = m.rows();
    let mut multipliers = vec![Rational::zero(); slot_count(n)];
    let mut offset = 0;
    for j in 0..n.saturating_sub(1) {
        for i in (j + 1..n).rev() {
            if m[(i, j)].is_zero() {
                continue;
            }
            let pivot = &m[(i - 1, j)];
            if pivot.is_zero() {
                return Err(Error::NotItn(format!(
                    "{side} pass: zero pivot at ({}, {}) above a nonzero entry",
                    i,
                    j + 1
                )));
            }
            let q = &m[(i, j)] / pivot;
            if q.is_negative() {
                return Err(Error::NotItn(format!(
                    "{side} pass: negative multiplier {q} for L{}",
                    i + 1
                )));
            }
            m.add_row_multiple(i, i - 1, &-&q);
            multipliers[offset + (n - 1 - i)] = q;
        }
        offset += n - 1 - j;
    }
    Ok(multipliers)
}

/// Successive EB factorization of an invertible TN matrix.
pub fn neville_factorize(a: &Matrix) -> Result<SebFactorization> {
    let n = a.order()?;
    let mut p = a.clone();
    let l = neville_pass(&mut p, "lower")?;
    let d: Vec<Rational> = (0..n).map(|i| p[(i, i)].clone()).collect();
    if let Some(i) = d.iter().position(|x| !x.is_positive()) {
        return Err(Error::NotItn(format!(
            "pivot {} at position {} is not positive",
            d[i],
            i + 1
        )));
    }
    let mut pt = p.transpose();
    let v = neville_pass(&mut pt, "upper")?;
    debug_assert_eq!(pt, Matrix::diagonal(&d));
    let u = v.into_iter().rev().collect();
    SebFactorization::new(n, l, d, u)
}

/// Multiplies the factorization out, in product order.
pub fn compose(f: &SebFactorization) -> Matrix {
    let n = f.n;
    let mut m = Matrix::identity(n);
    // Right-multiplication by L_i(q) adds q * col i to col i-1; by U_i(q)
    // adds q * col i-1 to col i.
    for (i, q) in lower_slot_indices(n).into_iter().zip(&f.l) {
        m.add_col_multiple(i - 2, i - 1, q);
    }
    for (c, d) in f.d.iter().enumerate() {
        m.scale_col(c, d);
    }
    for (i, q) in upper_slot_indices(n).into_iter().zip(&f.u) {
        m.add_col_multiple(i - 1, i - 2, q);
    }
    m
}

pub fn classify_factorization(f: &SebFactorization) -> FactorizationClass {
    if f.l.iter().chain(&f.u).all(Rational::is_positive) {
        return FactorizationClass::Tp;
    }
    let positives = |family: Vec<&Rational>| family.into_iter().filter(|q| q.is_positive()).count();
    let counts: Vec<(usize, usize)> = (2..=f.n)
        .map(|i| (positives(f.lower_family(i)), positives(f.upper_family(i))))
        .collect();
    if counts.iter().all(|&(a, b)| a == 1 && b == 1) {
        FactorizationClass::BasicOscillatory
    } else if counts.iter().all(|&(a, b)| a >= 1 && b >= 1) {
        FactorizationClass::Oscillatory
    } else {
        FactorizationClass::ItnOnly
    }
}

/// Rearranges a product of EB factors into slot order.
///
/// Each factor lands in the leftmost slot it can reach, which may differ
/// from the Neville placement; [`SebFactorization::canonicalize`] maps the
/// result to that.
///
/// Allowed moves are swaps of adjacent `L_i, L_j` (or `U_i, U_j`) with
/// `|i - j| > 1`, and of adjacent `L_i, U_j` with `i != j`. Factors with a
/// zero multiplier are identities and dropped. At most one `D` is allowed,
/// with every `L` to its left and every `U` to its right.
pub fn normalize_commutation(n: usize, factors: &[EbFactor]) -> Result<SebFactorization> {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut d: Option<Vec<Rational>> = None;
    for (pos, factor) in factors.iter().enumerate() {
        match factor {
            EbFactor::Lower { i, q } | EbFactor::Upper { i, q } => {
                check_index(*i, n)?;
                if q.is_negative() {
                    return Err(Error::NotNormalizable(format!("negative multiplier in {factor}")));
                }
                if q.is_zero() {
                    continue;
                }
                if let EbFactor::Lower { .. } = factor {
                    if d.is_some() {
                        return Err(Error::NotNormalizable(format!("{factor} follows D")));
                    }
                    if let Some(u) = factors[..pos].iter().find(
                        |g| matches!(g, EbFactor::Upper { i: j, q } if j == i && !q.is_zero()),
                    ) {
                        return Err(Error::NotNormalizable(format!("{u} precedes {factor}")));
                    }
                    lower.push((*i, q.clone()));
                } else {
                    upper.push((*i, q.clone()));
                }
            }
            EbFactor::Diagonal(values) => {
                if d.is_some() {
                    return Err(Error::NotNormalizable("more than one D factor".into()));
                }
                if values.len() != n || values.iter().any(|x| !x.is_positive()) {
                    return Err(Error::NotNormalizable(format!(
                        "{factor} is not a positive diagonal of size {n}"
                    )));
                }
                if !upper.is_empty() {
                    return Err(Error::NotNormalizable("U factor precedes D".into()));
                }
                d = Some(values.clone());
            }
        }
    }
    let l = embed(&lower, &lower_slot_indices(n))?;
    let u = embed(&upper, &upper_slot_indices(n))?;
    SebFactorization::new(n, l, d.unwrap_or_else(|| vec![Rational::one(); n]), u)
}

/// Embeds a same-kind factor sequence into the slot pattern, moving a
/// factor left only past factors whose index differs by more than one.
/// Taking the earliest movable factor for each slot never blocks a later
/// slot, so this finds an embedding whenever one exists.
fn embed(seq: &[(usize, Rational)], slots: &[usize]) -> Result<Vec<Rational>> {
    let mut remaining: Vec<Option<&(usize, Rational)>> = seq.iter().map(Some).collect();
    let mut out = vec![Rational::zero(); slots.len()];
    for (pos, &j) in slots.iter().enumerate() {
        for slot in remaining.iter_mut() {
            let Some((i, q)) = *slot else { continue };
            if *i == j {
                out[pos] = q.clone();
                *slot = None;
                break;
            }
            if i.abs_diff(j) <= 1 {
                break;
            }
        }
    }
    let left: Vec<String> = remaining
        .iter()
        .flatten()
        .map(|(i, q)| format!("{i}({q})"))
        .collect();
    if !left.is_empty() {
        return Err(Error::NotNormalizable(format!(
            "factors {} do not fit the canonical order",
            left.join(" ")
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use proptest::prelude::*;
    use std::collections::{HashSet, VecDeque};

    fn r(x: i64) -> Rational {
        Rational::from(x)
    }

    fn rs(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| r(x)).collect()
    }

    fn lower(i: usize, q: i64) -> EbFactor {
        EbFactor::Lower { i, q: r(q) }
    }

    fn upper(i: usize, q: i64) -> EbFactor {
        EbFactor::Upper { i, q: r(q) }
    }

    fn product(n: usize, factors: &[EbFactor]) -> Matrix {
        factors.iter().fold(Matrix::identity(n), |acc, f| acc.mul(&f.matrix(n).unwrap()).unwrap())
    }

    #[test]
    fn eb_matrices() {
        let l = eb_matrix(EbKind::Lower, 2, &r(4), 3).unwrap();
        assert_eq!(l, Matrix::from_ints(&[[1, 0, 0], [4, 1, 0], [0, 0, 1]]));
        assert_eq!(eb_matrix(EbKind::Lower, 3, &r(0), 3).unwrap(), Matrix::identity(3));
        assert_eq!(
            eb_matrix(EbKind::Upper, 3, &r(2), 3).unwrap(),
            eb_matrix(EbKind::Lower, 3, &r(2), 3).unwrap().transpose()
        );
        assert!(matches!(eb_matrix(EbKind::Lower, 1, &r(1), 3), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(eb_matrix(EbKind::Upper, 4, &r(1), 3), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn slot_layout() {
        assert_eq!(lower_slot_indices(4), vec![4, 3, 2, 4, 3, 4]);
        assert_eq!(upper_slot_indices(4), vec![4, 3, 4, 2, 3, 4]);
        assert_eq!([2, 3, 4].map(|i| x_offset(4, i)), [1, 4, 6]);
        for n in 2..=8 {
            assert_eq!(x_offset(n, n), slot_count(n));
        }
    }

    #[test]
    fn three_by_three_example() {
        let f = neville_factorize(&corpus::eq5_matrix()).unwrap();
        assert_eq!(f.l(), rs(&[1, 2, 3]).as_slice());
        assert_eq!(f.d(), rs(&[1, 2, 3]).as_slice());
        assert_eq!(f.u(), rs(&[2, 1, 1]).as_slice());
        assert_eq!(f.to_string(), "L3(1) L2(2) L3(3) D(1,2,3) U3(2) U2(1) U3(1)");
        assert_eq!(compose(&f), corpus::eq5_matrix());
    }

    #[test]
    fn identity_factorizes_trivially() {
        let f = neville_factorize(&Matrix::identity(4)).unwrap();
        assert_eq!(f, SebFactorization::identity(4));
        assert_eq!(SebFactorization::identity(3).to_string(), "D(1,1,1)");
        let d = SebFactorization::identity(3).with_diagonal(rs(&[2, 3, 5])).unwrap();
        assert_eq!(compose(&d), Matrix::diagonal(&rs(&[2, 3, 5])));
    }

    #[test]
    fn reference_factorizations() {
        let cases: Vec<(Matrix, &str)> = vec![
            (
                corpus::basic_oscillatory_4x4(),
                "L3(1) L2(2) L4(3) D(1,1,1,1) U3(4) U4(5) U2(6)",
            ),
            (
                corpus::exponent_example_4x4(),
                "L4(1) L3(3) L2(2) D(1,1,1,1) U3(1) U4(2) U2(1) U3(2) U4(1)",
            ),
            (
                corpus::exponent_example_5x5(),
                "L2(2) L5(3) L4(4) L3(2) L5(2) L4(1) L5(2) D(1,1,1,1,1) U5(1) U4(2) U5(3) U3(3) U2(2)",
            ),
            (
                corpus::product_family()[0].clone(),
                "L4(5/2) L3(1) L2(4) L4(11/2) L3(13/2) L4(1) D(2,1,3,5) U3(1) U4(2) U2(4) U3(2) U4(3)",
            ),
            (
                corpus::product_family()[1].clone(),
                "L4(5) L3(3) L2(2) L4(6) L3(5/2) L4(2) D(1,2,3,4) U3(2) U4(1) U2(2) U3(4) U4(3)",
            ),
            (
                corpus::early_tp_pair()[0].clone(),
                "L4(2) L3(1) L2(3) D(1,1,1,1) U3(1) U4(1) U2(1) U3(2) U4(3)",
            ),
            (
                corpus::early_tp_pair()[1].clone(),
                "L4(1) L3(3) L2(2) L4(1) L3(2) D(1,1,1,1) U2(3) U3(1) U4(2)",
            ),
            (corpus::bound_example_3x3(), "L2(1) L3(2) D(1,1,1) U3(2) U2(1) U3(4)"),
        ];
        for (a, text) in cases {
            let f = neville_factorize(&a).unwrap();
            assert_eq!(f.to_string(), text);
            assert_eq!(compose(&f), a);
            assert_eq!(SebFactorization::from_text(text, None).unwrap(), f);
        }
    }

    #[test]
    fn basic_oscillatory_slots() {
        let f = neville_factorize(&corpus::basic_oscillatory_4x4()).unwrap();
        assert_eq!(f.l(), rs(&[0, 1, 2, 0, 0, 3]).as_slice());
        assert_eq!(f.u(), rs(&[0, 4, 5, 6, 0, 0]).as_slice());
        assert_eq!(f.classify(), FactorizationClass::BasicOscillatory);
    }

    #[test]
    fn non_itn_inputs_are_rejected() {
        let negative = Matrix::from_ints(&[[1, 2], [3, 1]]);
        assert!(matches!(neville_factorize(&negative), Err(Error::NotItn(_))));
        let swap = Matrix::from_ints(&[[0, 1], [1, 0]]);
        assert!(matches!(neville_factorize(&swap), Err(Error::NotItn(_))));
        let singular = Matrix::from_ints(&[[1, 1], [1, 1]]);
        assert!(matches!(neville_factorize(&singular), Err(Error::NotItn(_))));
        let negative_upper = Matrix::from_ints(&[[1, -1], [0, 1]]);
        assert!(matches!(neville_factorize(&negative_upper), Err(Error::NotItn(_))));
        assert!(matches!(neville_factorize(&Matrix::zeros(2, 3)), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn packing() {
        let f = neville_factorize(&corpus::exponent_example_5x5()).unwrap();
        let p = f.pack();
        assert_eq!(p.offsets, vec![1, 5, 8, 10]);
        assert_eq!(p.l_vector(2), &rs(&[0, 0, 0, 2]));
        assert_eq!(p.l_vector(3), &rs(&[3, 4, 2]));
        assert_eq!(p.l_vector(4), &rs(&[2, 1]));
        assert_eq!(p.l_vector(5), &rs(&[2]));
        assert_eq!(p.u_vector(5), &rs(&[1]));
        assert_eq!(p.u_vector(4), &rs(&[2, 3]));

        let small = SebFactorization::new(3, rs(&[5, 6, 7]), rs(&[1, 1, 1]), rs(&[0, 0, 0])).unwrap();
        assert_eq!(small.pack().l, vec![rs(&[5, 6]), rs(&[7])]);
    }

    #[test]
    fn grouped_form() {
        let f = neville_factorize(&corpus::eq5_matrix()).unwrap();
        let wq = f.wq_form();
        assert_eq!(wq.w, vec![(2, rs(&[1, 2])), (3, rs(&[3]))]);
        assert_eq!(wq.q, vec![(3, rs(&[2])), (2, rs(&[1, 1]))]);
        assert_eq!(wq.to_string(), "W2(1,2) W3(3) D(1,2,3) Q3(2) Q2(1,1)");
        assert_eq!(wq.matrix(), corpus::eq5_matrix());

        let g = neville_factorize(&corpus::exponent_example_4x4()).unwrap().wq_form();
        assert_eq!(g.w, vec![(2, rs(&[1, 3, 2]))]);
        assert_eq!(g.q, vec![(3, rs(&[1, 2])), (2, rs(&[1, 2, 1]))]);
        assert_eq!(g.matrix(), corpus::exponent_example_4x4());

        let id = SebFactorization::identity(3).wq_form();
        assert!(id.w.is_empty() && id.q.is_empty());
        assert_eq!(id.to_string(), "D(1,1,1)");
    }

    #[test]
    fn factorization_classes() {
        let all = SebFactorization::new(3, rs(&[1, 2, 3]), rs(&[1, 1, 1]), rs(&[4, 5, 6])).unwrap();
        assert_eq!(all.classify(), FactorizationClass::Tp);
        assert_eq!(SebFactorization::identity(3).classify(), FactorizationClass::ItnOnly);
        let eq5 = neville_factorize(&corpus::eq5_matrix()).unwrap();
        assert_eq!(eq5.classify(), FactorizationClass::Tp);
        let f = neville_factorize(&corpus::exponent_example_4x4()).unwrap();
        assert_eq!(f.classify(), FactorizationClass::Oscillatory);
    }

    #[test]
    fn commutation_examples() {
        // U5(1) U4(2) U3(4) U5(6) U2(7) U4(9): the U3 and U5 swap, then U4(9)
        // passes U2.
        let n = 5;
        let factors = vec![upper(5, 1), upper(4, 2), upper(3, 4), upper(5, 6), upper(2, 7), upper(4, 9)];
        let f = normalize_commutation(n, &factors).unwrap();
        assert_eq!(f.u(), rs(&[1, 2, 6, 4, 9, 0, 7, 0, 0, 0]).as_slice());
        assert_eq!(f.to_string(), "D(1,1,1,1,1) U5(1) U4(2) U5(6) U3(4) U4(9) U2(7)");
        assert_eq!(compose(&f), product(n, &factors));

        let g = neville_factorize(&corpus::eq5_matrix()).unwrap();
        assert_eq!(normalize_commutation(3, &g.factors()).unwrap(), g);

        let swapped = normalize_commutation(4, &[lower(4, 5), lower(2, 7)]).unwrap();
        assert_eq!(swapped.l(), rs(&[5, 0, 7, 0, 0, 0]).as_slice());
        assert_eq!(compose(&swapped), product(4, &[lower(2, 7), lower(4, 5)]));
    }

    #[test]
    fn commutation_failures() {
        assert!(matches!(
            normalize_commutation(3, &[lower(3, 1), lower(3, 1), lower(2, 1)]),
            Err(Error::NotNormalizable(_))
        ));
        assert!(matches!(
            normalize_commutation(3, &[upper(2, 1), lower(2, 1)]),
            Err(Error::NotNormalizable(_))
        ));
        let d = EbFactor::Diagonal(rs(&[1, 1, 1]));
        assert!(matches!(
            normalize_commutation(3, &[d.clone(), lower(2, 1)]),
            Err(Error::NotNormalizable(_))
        ));
        assert!(matches!(
            normalize_commutation(3, &[d.clone(), d]),
            Err(Error::NotNormalizable(_))
        ));
        // L2 and U3 commute, so this is fine.
        assert!(normalize_commutation(3, &[upper(3, 1), lower(2, 1)]).is_ok());
    }

    #[test]
    fn text_and_json_forms() {
        let f = SebFactorization::from_text("L3(1) L2(2) L3(3) D(1,2,3) U3(2) U2(1) U3(1)", None).unwrap();
        assert_eq!(compose(&f), corpus::eq5_matrix());
        assert_eq!(
            f.to_json_string(),
            r#"{"n":3,"l":["1","2","3"],"d":["1","2","3"],"u":["2","1","1"]}"#
        );
        assert_eq!(SebFactorization::from_json_str(&f.to_json_string()).unwrap(), f);
        assert!(SebFactorization::from_text("L2(1)", None).is_err());
        assert!(SebFactorization::from_text("L2(1)", Some(3)).is_ok());
        assert!(SebFactorization::from_text("X2(1)", Some(3)).is_err());
        assert!(SebFactorization::from_text("D(1,1)", Some(3)).is_err());
        assert!(SebFactorization::from_json_str(r#"{"n":2,"l":["-1"],"d":["1","1"],"u":["0"]}"#).is_err());
    }

    /// Multiplier vector for one side: each `W_i` bracket gets a random
    /// number of leading zeros followed by positive values.
    fn canonical_side(n: usize, rng: &mut impl rand::Rng) -> Vec<Rational> {
        let mut out = Vec::new();
        for i in 2..=n {
            let len = n - i + 1;
            let zeros = rng.gen_range(0..=len);
            for p in 0..len {
                out.push(if p < zeros { r(0) } else { r(rng.gen_range(1..=9)) });
            }
        }
        out
    }

    fn random_factorization(n: usize, seed: u64, canonical: bool) -> SebFactorization {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let d: Vec<Rational> = (0..n).map(|_| r(rng.gen_range(1..=5))).collect();
        if canonical {
            let l = canonical_side(n, &mut rng);
            let u_lower_form = canonical_side(n, &mut rng);
            let u = u_lower_form.into_iter().rev().collect();
            SebFactorization::new(n, l, d, u).unwrap()
        } else {
            let k = slot_count(n);
            let mut side = || -> Vec<Rational> {
                (0..k).map(|_| if rng.gen_bool(0.4) { r(0) } else { r(rng.gen_range(1..=9)) }).collect()
            };
            let l = side();
            let u = side();
            SebFactorization::new(n, l, d, u).unwrap()
        }
    }

    /// All orderings reachable by the allowed adjacent swaps; used to decide
    /// whether some ordering is a subsequence of the canonical slot order.
    fn bfs_normalizable(n: usize, factors: &[EbFactor]) -> bool {
        let key = |f: &EbFactor| match f {
            EbFactor::Lower { i, .. } => (0u8, *i),
            EbFactor::Upper { i, .. } => (2u8, *i),
            EbFactor::Diagonal(_) => (1u8, 0),
        };
        let commute = |a: (u8, usize), b: (u8, usize)| match (a.0, b.0) {
            (1, _) | (_, 1) => false,
            (x, y) if x == y => a.1.abs_diff(b.1) > 1,
            _ => a.1 != b.1,
        };
        let mut target: Vec<(u8, usize)> = lower_slot_indices(n).into_iter().map(|i| (0, i)).collect();
        target.push((1, 0));
        target.extend(upper_slot_indices(n).into_iter().map(|i| (2, i)));
        let is_subsequence = |seq: &[(u8, usize)]| {
            let mut it = target.iter();
            seq.iter().all(|s| it.any(|t| t == s))
        };
        let start: Vec<(u8, usize)> = factors.iter().map(key).collect();
        let mut seen = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(seq) = queue.pop_front() {
            if is_subsequence(&seq) {
                return true;
            }
            for p in 0..seq.len().saturating_sub(1) {
                if commute(seq[p], seq[p + 1]) {
                    let mut next = seq.clone();
                    next.swap(p, p + 1);
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        false
    }

    #[test]
    fn greedy_embedding_matches_search() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..400 {
            let n = rng.gen_range(2..=4);
            let len = rng.gen_range(0..=6);
            let mut factors: Vec<EbFactor> = (0..len)
                .map(|_| {
                    let i = rng.gen_range(2..=n);
                    if rng.gen_bool(0.5) {
                        lower(i, 1)
                    } else {
                        upper(i, 1)
                    }
                })
                .collect();
            if rng.gen_bool(0.5) {
                let at = rng.gen_range(0..=factors.len());
                factors.insert(at, EbFactor::Diagonal(vec![r(1); n]));
            }
            let result = normalize_commutation(n, &factors);
            assert_eq!(result.is_ok(), bfs_normalizable(n, &factors), "{factors:?}");
            if let Ok(f) = result {
                assert_eq!(compose(&f), product(n, &factors));
            }
        }
    }

    proptest! {
        #[test]
        fn inverse_eb_pairs(n in 2usize..6, i_pick in 0usize..8, p in -9i64..10, q in 1i64..5) {
            let i = 2 + i_pick % (n - 1);
            let x = Rational::new(p, q).unwrap();
            for kind in [EbKind::Lower, EbKind::Upper] {
                let a = eb_matrix(kind, i, &x, n).unwrap();
                let b = eb_matrix(kind, i, &-&x, n).unwrap();
                prop_assert_eq!(a.mul(&b).unwrap(), Matrix::identity(n));
            }
        }

        #[test]
        fn canonical_roundtrip(n in 2usize..=5, seed in any::<u64>()) {
            let f = random_factorization(n, seed, true);
            prop_assert!(f.is_canonical());
            let a = compose(&f);
            prop_assert_eq!(&neville_factorize(&a).unwrap(), &f);
        }

        #[test]
        fn refactorization_is_canonical_and_equivalent(n in 2usize..=5, seed in any::<u64>()) {
            let f = random_factorization(n, seed, false);
            let a = compose(&f);
            let g = neville_factorize(&a).unwrap();
            prop_assert!(g.is_canonical());
            prop_assert_eq!(compose(&g), a);
            prop_assert_eq!(f.is_canonical(), f == g);
        }

        #[test]
        fn compose_matches_dense_product(n in 2usize..=5, seed in any::<u64>()) {
            let f = random_factorization(n, seed, false);
            prop_assert_eq!(compose(&f), product(n, &f.factors()));
            prop_assert_eq!(f.wq_form().matrix(), compose(&f));
            prop_assert_eq!(compose(&f.transpose()), compose(&f).transpose());
            prop_assert_eq!(
                compose(&f.lower_part()).mul(&Matrix::diagonal(f.d())).unwrap().mul(&compose(&f.upper_part())).unwrap(),
                compose(&f)
            );
        }

        #[test]
        fn normalization_preserves_product(n in 2usize..=5, seed in any::<u64>()) {
            let f = random_factorization(n, seed, false);
            let g = normalize_commutation(n, &f.factors()).unwrap();
            prop_assert_eq!(compose(&g), compose(&f));
            let parsed = SebFactorization::from_text(&f.to_string(), None).unwrap();
            prop_assert_eq!(&parsed, &f.canonicalize());
            if f.is_canonical() {
                prop_assert_eq!(&parsed, &f);
            }
        }
    }
}
