//! Total nonnegativity, total positivity and oscillation tests.
//!
//! The full scans check every minor and report the first failing one in
//! scan order: by order `k`, then row set, then column set, both
//! lexicographic. The other tests (corner minors, Gantmacher-Krein,
//! irreducibility, factorization) are independent criteria meant to be
//! compared against the scans.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{determinant, IndexSet, IntegerRows, Limits, Matrix};
use crate::rational::Rational;
use crate::seb::{neville_factorize, FactorizationClass};

/// A minor singled out by a test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub rows: IndexSet,
    pub cols: IndexSet,
    pub value: Rational,
}

/// Outcome of a full minor scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanResult {
    pub holds: bool,
    pub witness: Option<Witness>,
}

fn scan(a: &Matrix, limits: &Limits, fails: impl Fn(&Rational) -> bool) -> Result<ScanResult> {
    limits.check(a.rows().max(a.cols()))?;
    let engine = IntegerRows::new(a);
    for k in 1..=a.rows().min(a.cols()) {
        let col_sets: Vec<IndexSet> = IndexSet::all(a.cols(), k).collect();
        for rows in IndexSet::all(a.rows(), k) {
            for cols in &col_sets {
                let value = engine.minor(&rows, cols);
                if fails(&value) {
                    return Ok(ScanResult {
                        holds: false,
                        witness: Some(Witness {
                            rows,
                            cols: cols.clone(),
                            value,
                        }),
                    });
                }
            }
        }
    }
    Ok(ScanResult {
        holds: true,
        witness: None,
    })
}

/// Every minor is nonnegative; otherwise the first negative minor.
pub fn is_tn(a: &Matrix) -> Result<ScanResult> {
    is_tn_with(a, &Limits::default())
}

pub fn is_tn_with(a: &Matrix, limits: &Limits) -> Result<ScanResult> {
    scan(a, limits, Rational::is_negative)
}

/// Every minor is positive; otherwise the first nonpositive minor.
pub fn is_tp(a: &Matrix) -> Result<ScanResult> {
    is_tp_with(a, &Limits::default())
}

pub fn is_tp_with(a: &Matrix, limits: &Limits) -> Result<ScanResult> {
    a.order()?;
    scan(a, limits, |x| !x.is_positive())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corner {
    LowerLeft,
    UpperRight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CornerSpec {
    pub side: Corner,
    pub size: usize,
}

impl CornerSpec {
    pub fn lower_left(size: usize) -> Self {
        CornerSpec {
            side: Corner::LowerLeft,
            size,
        }
    }

    pub fn upper_right(size: usize) -> Self {
        CornerSpec {
            side: Corner::UpperRight,
            size,
        }
    }

    /// Row and column sets in an `n x n` matrix.
    pub fn index_sets(&self, n: usize) -> (IndexSet, IndexSet) {
        let k = self.size;
        let leading = IndexSet::range(1, k);
        let trailing = IndexSet::range(n - k + 1, n);
        match self.side {
            Corner::LowerLeft => (trailing, leading),
            Corner::UpperRight => (leading, trailing),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CornerMinor {
    pub spec: CornerSpec,
    pub value: Rational,
}

fn corner_value(engine: &IntegerRows, n: usize, spec: CornerSpec) -> Rational {
    let (rows, cols) = spec.index_sets(n);
    engine.minor(&rows, &cols)
}

/// Lower-left corner minors of sizes `1..=n` (the last is `det A`) followed
/// by upper-right ones of sizes `1..n`.
pub fn corner_minors(a: &Matrix) -> Result<Vec<CornerMinor>> {
    let n = a.order()?;
    let engine = IntegerRows::new(a);
    let specs = (1..=n)
        .map(CornerSpec::lower_left)
        .chain((1..n).map(CornerSpec::upper_right));
    Ok(specs
        .map(|spec| CornerMinor {
            spec,
            value: corner_value(&engine, n, spec),
        })
        .collect())
}

/// Lower-left (or upper-right) corner minors of sizes `1..n`, excluding the
/// determinant.
pub fn side_corner_minors(a: &Matrix, side: Corner) -> Result<Vec<CornerMinor>> {
    let n = a.order()?;
    let engine = IntegerRows::new(a);
    Ok((1..n)
        .map(|size| {
            let spec = CornerSpec { side, size };
            CornerMinor {
                spec,
                value: corner_value(&engine, n, spec),
            }
        })
        .collect())
}

/// TP test for a matrix already known to be TN: all corner minors positive.
///
/// Debug builds verify the TN premise with a full scan and return `NotTn`
/// when it fails.
pub fn is_tp_given_tn(a: &Matrix) -> Result<bool> {
    if cfg!(debug_assertions) {
        let tn = is_tn(a)?;
        if let Some(w) = tn.witness {
            return Err(Error::NotTn(format!(
                "minor ({}|{}) = {}",
                w.rows, w.cols, w.value
            )));
        }
    }
    Ok(corner_minors(a)?.iter().all(|c| c.value.is_positive()))
}

/// Whether the digraph with an arc `i -> j` for every nonzero `a_ij` is
/// strongly connected.
pub fn is_irreducible(a: &Matrix) -> Result<bool> {
    let n = a.order()?;
    let reaches_all = |forward: bool| {
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for w in 0..n {
                let entry = if forward { &a[(v, w)] } else { &a[(w, v)] };
                if !seen[w] && !entry.is_zero() {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    Ok(reaches_all(true) && reaches_all(false))
}

pub fn is_invertible(a: &Matrix) -> Result<bool> {
    Ok(!determinant(a)?.is_zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OscillatoryMethod {
    /// Some power `A^k` with `k <= n-1` is TP.
    Definition,
    /// TN, invertible, and all entries next to the diagonal positive.
    GantmacherKrein,
    /// TN, invertible and irreducible.
    Irreducible,
    /// Every `L_i` and `U_i` family of the factorization has a positive
    /// multiplier.
    Factorization,
}

impl OscillatoryMethod {
    pub const ALL: [OscillatoryMethod; 4] = [
        OscillatoryMethod::Definition,
        OscillatoryMethod::GantmacherKrein,
        OscillatoryMethod::Irreducible,
        OscillatoryMethod::Factorization,
    ];
}

pub fn is_oscillatory(a: &Matrix, method: OscillatoryMethod) -> Result<bool> {
    is_oscillatory_with(a, method, &Limits::default())
}

pub fn is_oscillatory_with(a: &Matrix, method: OscillatoryMethod, limits: &Limits) -> Result<bool> {
    let n = a.order()?;
    match method {
        OscillatoryMethod::Definition => {
            if !is_tn_with(a, limits)?.holds {
                return Ok(false);
            }
            let mut power = a.clone();
            for k in 1..=n.saturating_sub(1).max(1) {
                if k > 1 {
                    power = power.mul(a)?;
                }
                if is_tp_with(&power, limits)?.holds {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        OscillatoryMethod::GantmacherKrein => {
            let near_diagonal = (1..n).all(|i| a[(i - 1, i)].is_positive() && a[(i, i - 1)].is_positive());
            Ok(near_diagonal && is_tn_with(a, limits)?.holds && is_invertible(a)?)
        }
        OscillatoryMethod::Irreducible => {
            Ok(is_irreducible(a)? && is_tn_with(a, limits)?.holds && is_invertible(a)?)
        }
        OscillatoryMethod::Factorization => match neville_factorize(a) {
            Ok(f) => Ok(f.classify() != FactorizationClass::ItnOnly),
            Err(Error::NotItn(_)) => Ok(false),
            Err(e) => Err(e),
        },
    }
}

/// Runs every criterion and fails with `MethodDisagreement` unless all agree.
pub fn oscillatory_consensus(a: &Matrix) -> Result<bool> {
    oscillatory_consensus_with(a, &Limits::default())
}

pub fn oscillatory_consensus_with(a: &Matrix, limits: &Limits) -> Result<bool> {
    let verdicts = OscillatoryMethod::ALL
        .iter()
        .map(|&m| Ok((m, is_oscillatory_with(a, m, limits)?)))
        .collect::<Result<Vec<_>>>()?;
    let first = verdicts[0].1;
    if verdicts.iter().any(|&(_, v)| v != first) {
        return Err(Error::MethodDisagreement(format!("{verdicts:?}")));
    }
    Ok(first)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub is_tn: bool,
    pub is_invertible: bool,
    pub is_tp: bool,
    pub is_oscillatory: bool,
    /// `None` when the matrix has no bidiagonal factorization.
    pub is_basic_oscillatory: Option<bool>,
    pub witnesses: Vec<Witness>,
}

/// Full report. `methods` selects the oscillation criteria to run; with
/// more than one they must agree.
pub fn classify(a: &Matrix, methods: &[OscillatoryMethod], limits: &Limits) -> Result<ClassificationReport> {
    let n = a.order()?;
    let tn = is_tn_with(a, limits)?;
    let tp = is_tp_with(a, limits)?;
    let is_invertible = is_invertible(a)?;
    let mut verdicts = Vec::new();
    for &m in methods {
        verdicts.push((m, is_oscillatory_with(a, m, limits)?));
    }
    if verdicts.windows(2).any(|w| w[0].1 != w[1].1) {
        return Err(Error::MethodDisagreement(format!("{verdicts:?}")));
    }
    let is_oscillatory = match verdicts.first() {
        Some(&(_, v)) => v,
        None => is_oscillatory_with(a, OscillatoryMethod::GantmacherKrein, limits)?,
    };
    let is_basic_oscillatory = match neville_factorize(a) {
        Ok(f) => Some((2..=n).all(|i| {
            let count = |family: Vec<&Rational>| family.into_iter().filter(|q| q.is_positive()).count();
            count(f.lower_family(i)) == 1 && count(f.upper_family(i)) == 1
        })),
        Err(_) => None,
    };
    let witnesses = tn.witness.into_iter().chain(if tn.holds { tp.witness } else { None }).collect();
    Ok(ClassificationReport {
        is_tn: tn.holds,
        is_invertible,
        is_tp: tp.holds,
        is_oscillatory,
        is_basic_oscillatory,
        witnesses,
    })
}
