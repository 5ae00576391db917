//! Exponents of oscillatory matrices.
//!
//! The exponent `r(A)` is the least `k` with `A^k` TP. `r_lower` and
//! `r_upper` are the least powers whose lower-left (upper-right) corner
//! minors of sizes `1..n` are all positive. Three routes are provided: a
//! brute-force scan of powers, the corner exponents of the `L` and `U`
//! parts of the factorization, and a closed-form prediction from the
//! positivity pattern of those parts.

use std::fmt;

use itertools::Itertools;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{is_oscillatory_with, is_tp_with, side_corner_minors, Corner, CornerMinor, OscillatoryMethod};
use crate::error::{Error, Result};
use crate::matrix::{mat_pow, Limits, Matrix};
use crate::planar::{build_network, lower_corner_copies, Copies};
use crate::rational::Rational;
use crate::seb::{compose, lower_slot_indices, neville_factorize, slot_count, EbFactor, SebFactorization};

pub use crate::generate::{generate_z1, generate_z2, psi_patterns, PsiChoice};

/// Tuple budget for product scans.
pub const MAX_PRODUCT_TUPLES: usize = 10_000;

pub fn mu1(n: usize, s: usize) -> Result<usize> {
    check_s(n, s)?;
    Ok((n - 1).div_ceil(s - 1))
}

pub fn mu2(n: usize, s: usize) -> Result<usize> {
    check_s(n, s)?;
    Ok(s - 1)
}

fn check_s(n: usize, s: usize) -> Result<()> {
    if n < 2 || !(2..=n).contains(&s) {
        return Err(Error::ParamOutOfRange(format!("s = {s} outside [2, {n}]")));
    }
    Ok(())
}

/// Whether a bracket `l^i` (listed `L_n` first) selects a member of `Psi_i`:
/// its `L_i` multiplier is positive and some other one is zero.
pub fn psi_membership(pattern: &[Rational]) -> bool {
    match pattern.split_last() {
        Some((last, rest)) => last.is_positive() && rest.iter().any(Rational::is_zero),
        None => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassFamily {
    Z1,
    Z2,
    #[serde(rename = "Z1-plus-extra")]
    Z1PlusExtra,
    #[serde(rename = "Z2-plus-extra")]
    Z2PlusExtra,
    #[serde(rename = "unrecognized")]
    Unrecognized,
}

/// Class of a lower part (`L`, or `U^T`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassTag {
    pub family: ClassFamily,
    pub n: usize,
    pub s: Option<usize>,
    /// Factors outside the class support, for the plus-extra families.
    pub extras: Vec<EbFactor>,
    /// Present `L_j` of the `Psi_{s-1}` bracket, ascending.
    pub psi_pattern: Option<Vec<usize>>,
}

impl ClassTag {
    pub fn z1(n: usize, s: usize) -> Self {
        ClassTag {
            family: ClassFamily::Z1,
            n,
            s: Some(s),
            extras: Vec::new(),
            psi_pattern: None,
        }
    }

    /// `psi` is ignored for `s = 2`.
    pub fn z2(n: usize, s: usize, psi: Vec<usize>) -> Self {
        ClassTag {
            family: ClassFamily::Z2,
            n,
            s: Some(s),
            extras: Vec::new(),
            psi_pattern: (s > 2).then_some(psi),
        }
    }

    pub fn unrecognized(n: usize) -> Self {
        ClassTag {
            family: ClassFamily::Unrecognized,
            n,
            s: None,
            extras: Vec::new(),
            psi_pattern: None,
        }
    }

    pub fn with_extras(mut self, extras: Vec<EbFactor>) -> Self {
        self.family = match self.family {
            ClassFamily::Z1 | ClassFamily::Z1PlusExtra => ClassFamily::Z1PlusExtra,
            ClassFamily::Z2 | ClassFamily::Z2PlusExtra => ClassFamily::Z2PlusExtra,
            ClassFamily::Unrecognized => ClassFamily::Unrecognized,
        };
        self.extras = extras;
        self
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.family, ClassFamily::Z1 | ClassFamily::Z2)
    }

    /// `mu1` or `mu2` of the underlying class.
    pub fn mu(&self) -> Option<usize> {
        let s = self.s?;
        match self.family {
            ClassFamily::Z1 | ClassFamily::Z1PlusExtra => mu1(self.n, s).ok(),
            ClassFamily::Z2 | ClassFamily::Z2PlusExtra => mu2(self.n, s).ok(),
            ClassFamily::Unrecognized => None,
        }
    }

    /// Same family and parameter, ignoring `Psi` and extras.
    pub fn same_class(&self, other: &ClassTag) -> bool {
        self.family == other.family && self.n == other.n && self.s == other.s
    }

    fn base_support(&self) -> Option<Vec<bool>> {
        let s = self.s?;
        let n = self.n;
        let psi = self.psi_pattern.clone().unwrap_or_default();
        let z1 = matches!(self.family, ClassFamily::Z1 | ClassFamily::Z1PlusExtra);
        let mut out = Vec::with_capacity(slot_count(n));
        for i in 2..=n {
            for j in (i..=n).rev() {
                out.push(if z1 {
                    i <= s
                } else if s == 2 || i >= s {
                    true
                } else if i == s - 1 {
                    psi.contains(&j)
                } else {
                    j == i
                });
            }
        }
        Some(out)
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.family {
            ClassFamily::Z1 | ClassFamily::Z1PlusExtra => "Z1",
            ClassFamily::Z2 | ClassFamily::Z2PlusExtra => "Z2",
            ClassFamily::Unrecognized => return write!(f, "unrecognized"),
        };
        write!(f, "{base}({})", self.s.unwrap_or(0))?;
        if let Some(p) = &self.psi_pattern {
            let factors: String = p.iter().rev().map(|j| format!("L{j}")).collect();
            write!(f, " P={factors}")?;
        }
        for e in &self.extras {
            write!(f, " +{e}")?;
        }
        Ok(())
    }
}

/// Every pure class of lower parts in dimension `n`, `Z1` first.
fn all_pure_classes(n: usize) -> Vec<ClassTag> {
    let mut out: Vec<ClassTag> = (2..=n).map(|s| ClassTag::z1(n, s)).collect();
    out.push(ClassTag::z2(n, 2, Vec::new()));
    for s in 3..=n {
        for p in psi_patterns(n, s - 1) {
            out.push(ClassTag::z2(n, s, p));
        }
    }
    out
}

fn dimension_of(slots: usize) -> Result<usize> {
    (1..=slots + 1)
        .find(|&n| slot_count(n) >= slots)
        .filter(|&n| slot_count(n) == slots && n >= 2)
        .ok_or_else(|| Error::MalformedFactorization(format!("{slots} multipliers is not n(n-1)/2")))
}

/// All classes matching a lower part's positivity pattern.
///
/// The part is first brought to canonical slot positions. Exact matches are
/// returned when there are any. Otherwise the classes whose support is
/// strictly contained, restricted to those with the smallest `mu`, are
/// returned with the surplus slots as extras. Failing both, a single
/// `unrecognized` tag.
pub fn recognize_classes(l: &[Rational]) -> Result<Vec<ClassTag>> {
    let n = dimension_of(l.len())?;
    let part = SebFactorization::new(n, l.to_vec(), vec![Rational::one(); n], vec![Rational::zero(); l.len()])?;
    let canonical = part.canonicalize();
    let support: Vec<bool> = canonical.l().iter().map(Rational::is_positive).collect();
    let classes = all_pure_classes(n);

    let exact: Vec<ClassTag> = classes
        .iter()
        .filter(|c| c.base_support().as_ref() == Some(&support))
        .cloned()
        .collect();
    if !exact.is_empty() {
        return Ok(exact);
    }

    let contained: Vec<&ClassTag> = classes
        .iter()
        .filter(|c| {
            let base = c.base_support().expect("pure classes have a support");
            base.iter().zip(&support).all(|(b, s)| !b || *s)
        })
        .collect();
    let Some(best) = contained.iter().filter_map(|c| c.mu()).min() else {
        return Ok(vec![ClassTag::unrecognized(n)]);
    };
    let slots = lower_slot_indices(n);
    Ok(contained
        .into_iter()
        .filter(|c| c.mu() == Some(best))
        .map(|c| {
            let base = c.base_support().expect("pure classes have a support");
            let extras = (0..support.len())
                .filter(|&p| support[p] && !base[p])
                .map(|p| EbFactor::Lower {
                    i: slots[p],
                    q: canonical.l()[p].clone(),
                })
                .collect();
            c.clone().with_extras(extras)
        })
        .collect())
}

/// First tag of [`recognize_classes`].
pub fn recognize_class(l: &[Rational]) -> Result<ClassTag> {
    Ok(recognize_classes(l)?.remove(0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prediction {
    Exact(usize),
    UpperBound(usize),
}

/// Exponent predicted from the classes of `L` and `U^T`.
///
/// Both pure gives the exact value; one side with extras gives an upper
/// bound. Unrecognized tags, or extras on both sides, are `Unpredictable`.
pub fn predict_exponent(l_tag: &ClassTag, u_tag: &ClassTag) -> Result<Prediction> {
    let (Some(ml), Some(mu)) = (l_tag.mu(), u_tag.mu()) else {
        return Err(Error::Unpredictable(format!("tags {l_tag} and {u_tag}")));
    };
    let value = ml.max(mu);
    match (l_tag.is_pure(), u_tag.is_pure()) {
        (true, true) => Ok(Prediction::Exact(value)),
        (true, false) | (false, true) => Ok(Prediction::UpperBound(value)),
        (false, false) => Err(Error::Unpredictable(format!(
            "extras on both sides: {l_tag} and {u_tag}"
        ))),
    }
}

/// Picks the tag used for prediction out of every matching one. Pure tags
/// must agree on `mu`.
fn decisive_tag(tags: &[ClassTag]) -> Result<&ClassTag> {
    let pure: Vec<&ClassTag> = tags.iter().filter(|t| t.is_pure()).collect();
    if let Some(first) = pure.first() {
        if pure.iter().any(|t| t.mu() != first.mu()) {
            let listed: Vec<String> = pure.iter().map(ToString::to_string).collect();
            return Err(Error::InvariantViolation(format!(
                "overlapping classes with different exponents: {}",
                listed.join(", ")
            )));
        }
        return Ok(first);
    }
    tags.iter()
        .min_by_key(|t| t.mu().unwrap_or(usize::MAX))
        .ok_or_else(|| Error::Unpredictable("no class tags".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictionReport {
    pub prediction: Prediction,
    pub l_tags: Vec<ClassTag>,
    pub u_tags: Vec<ClassTag>,
}

/// Recognizes both sides of `f` and predicts.
pub fn predict_for(f: &SebFactorization) -> Result<PredictionReport> {
    let l_tags = recognize_classes(f.l())?;
    let u_tags = recognize_classes(f.transpose().l())?;
    let prediction = predict_exponent(decisive_tag(&l_tags)?, decisive_tag(&u_tags)?)?;
    Ok(PredictionReport {
        prediction,
        l_tags,
        u_tags,
    })
}

/// Least `w <= n-1` making every corner minor of sizes `1..n` on `side`
/// of `A^w` positive.
pub fn corner_exponent(a: &Matrix, side: Corner) -> Result<Option<usize>> {
    let n = a.order()?;
    let mut power = a.clone();
    for w in 1..n.max(2) {
        if w > 1 {
            power = power.mul(a)?;
        }
        if side_corner_minors(&power, side)?.iter().all(|c| c.value.is_positive()) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn require_oscillatory(a: &Matrix, limits: &Limits) -> Result<()> {
    if !is_oscillatory_with(a, OscillatoryMethod::GantmacherKrein, limits)? {
        return Err(Error::NotOscillatory("matrix is not oscillatory".into()));
    }
    Ok(())
}

fn bounded(a: &Matrix, side: Corner) -> Result<usize> {
    corner_exponent(a, side)?.ok_or_else(|| {
        Error::InvariantViolation(format!("{side:?} corner minors not positive by power n-1"))
    })
}

pub fn r_lower(a: &Matrix) -> Result<usize> {
    require_oscillatory(a, &Limits::default())?;
    bounded(a, Corner::LowerLeft)
}

pub fn r_upper(a: &Matrix) -> Result<usize> {
    require_oscillatory(a, &Limits::default())?;
    bounded(a, Corner::UpperRight)
}

/// Corner exponents of `f` from its planar network: the least number of
/// copies carrying every lower-left (for `U`, upper-right) corner family.
pub fn corner_exponents_via_network(f: &SebFactorization) -> Result<(Copies, Copies)> {
    let net = build_network(f);
    Ok((lower_corner_copies(&net)?, lower_corner_copies(&net.transpose())?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentMethod {
    Bruteforce,
    Theorem,
    Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentReport {
    pub n: usize,
    pub r: usize,
    pub r_lower: usize,
    pub r_upper: usize,
    pub method: ExponentMethod,
    pub l_class: ClassTag,
    pub u_class: ClassTag,
    /// `A^r`.
    pub witness_power: Matrix,
    /// A corner minor of `A^(r-1)` that vanishes, when `r > 1`.
    pub zero_witness: Option<CornerMinor>,
}

fn zero_corner(a: &Matrix, r: usize) -> Result<Option<CornerMinor>> {
    if r <= 1 {
        return Ok(None);
    }
    let power = mat_pow(a, (r - 1) as u32)?;
    let mut minors = side_corner_minors(&power, Corner::LowerLeft)?;
    minors.extend(side_corner_minors(&power, Corner::UpperRight)?);
    Ok(minors.into_iter().find(|c| !c.value.is_positive()))
}

fn report(a: &Matrix, f: &SebFactorization, r: usize, r_lower: usize, r_upper: usize, method: ExponentMethod) -> Result<ExponentReport> {
    Ok(ExponentReport {
        n: a.rows(),
        r,
        r_lower,
        r_upper,
        method,
        l_class: recognize_class(f.l())?,
        u_class: recognize_class(f.transpose().l())?,
        witness_power: mat_pow(a, r as u32)?,
        zero_witness: zero_corner(a, r)?,
    })
}

pub fn exponent_bruteforce(a: &Matrix) -> Result<ExponentReport> {
    exponent_bruteforce_with(a, &Limits::default())
}

/// Least `k <= n-1` with `A^k` TP, by full minor scans of the powers.
pub fn exponent_bruteforce_with(a: &Matrix, limits: &Limits) -> Result<ExponentReport> {
    limits.check(a.rows())?;
    require_oscillatory(a, limits)?;
    let n = a.rows();
    let mut power = a.clone();
    let mut r = None;
    for k in 1..n.max(2) {
        if k > 1 {
            power = power.mul(a)?;
        }
        if is_tp_with(&power, limits)?.holds {
            r = Some(k);
            break;
        }
    }
    let r = r.ok_or_else(|| Error::InvariantViolation(format!("oscillatory matrix with no TP power up to {}", n - 1)))?;
    let f = neville_factorize(a)?;
    report(a, &f, r, bounded(a, Corner::LowerLeft)?, bounded(a, Corner::UpperRight)?, ExponentMethod::Bruteforce)
}

/// `max(r_lower(L), r_upper(U))` over the `L` and `U` parts with `D = I`.
pub fn exponent_via_theorem(a: &Matrix) -> Result<ExponentReport> {
    require_oscillatory(a, &Limits::default())?;
    let f = neville_factorize(a)?;
    let r_lower = bounded(&compose(&f.lower_part()), Corner::LowerLeft)?;
    let r_upper = bounded(&compose(&f.upper_part()), Corner::UpperRight)?;
    report(a, &f, r_lower.max(r_upper), r_lower, r_upper, ExponentMethod::Theorem)
}

/// Exponent from the class formula; `Unpredictable` unless both sides
/// are pure classes.
pub fn exponent_via_formula(a: &Matrix) -> Result<ExponentReport> {
    require_oscillatory(a, &Limits::default())?;
    let f = neville_factorize(a)?;
    let predicted = predict_for(&f)?;
    let Prediction::Exact(r) = predicted.prediction else {
        return Err(Error::Unpredictable(format!("only {:?} is available", predicted.prediction)));
    };
    let mu = |tags: &[ClassTag]| decisive_tag(tags).map(|t| t.mu().unwrap_or(r));
    let (r_lower, r_upper) = (mu(&predicted.l_tags)?, mu(&predicted.u_tags)?);
    report(a, &f, r, r_lower, r_upper, ExponentMethod::Formula)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductCheck {
    /// Every checked ordered product is TP.
    pub holds: bool,
    pub mode: SamplingMode,
    pub tuples_checked: usize,
    /// Member indices of the first product found not TP.
    pub counterexample: Option<Vec<usize>>,
}

fn product(members: &[Matrix], order: &[usize]) -> Result<Matrix> {
    let mut acc = members[order[0]].clone();
    for &i in &order[1..] {
        acc = acc.mul(&members[i])?;
    }
    Ok(acc)
}

fn tuple_count(m: usize, k: usize) -> Option<usize> {
    u32::try_from(k).ok().and_then(|k| m.checked_pow(k))
}

/// Whether every ordered product of `k` members, repetition allowed, is TP.
///
/// All members must share the classes of `L` and `U^T`. All tuples are
/// checked when there are at most [`MAX_PRODUCT_TUPLES`] of them; otherwise
/// that many tuples are drawn with the seeded generator.
pub fn product_family_check(members: &[SebFactorization], k: usize, seed: u64, limits: &Limits) -> Result<ProductCheck> {
    if members.is_empty() || k == 0 {
        return Err(Error::ParamOutOfRange("need at least one member and k >= 1".into()));
    }
    let tags = members
        .iter()
        .map(|f| Ok((recognize_class(f.l())?, recognize_class(f.transpose().l())?)))
        .collect::<Result<Vec<_>>>()?;
    let (l0, u0) = &tags[0];
    for (x, (l, u)) in tags.iter().enumerate() {
        if !l.is_pure() || !u.is_pure() || !l.same_class(l0) || !u.same_class(u0) {
            return Err(Error::ClassMismatch(format!(
                "member {x} has classes {l} / {u}, member 0 has {l0} / {u0}"
            )));
        }
    }
    let matrices: Vec<Matrix> = members.iter().map(compose).collect();
    let m = matrices.len();
    let check = |order: &[usize]| -> Result<bool> { Ok(is_tp_with(&product(&matrices, order)?, limits)?.holds) };

    let exhaustive = tuple_count(m, k).is_some_and(|c| c <= MAX_PRODUCT_TUPLES);
    let tuples: Box<dyn Iterator<Item = Vec<usize>>> = if exhaustive {
        Box::new(itertools::repeat_n(0..m, k).multi_cartesian_product())
    } else {
        let mut rng = crate::generate::rng(seed);
        Box::new((0..MAX_PRODUCT_TUPLES).map(move |_| (0..k).map(|_| rng.gen_range(0..m)).collect()))
    };
    let mut checked = 0;
    for order in tuples {
        checked += 1;
        if !check(&order)? {
            return Ok(ProductCheck {
                holds: false,
                mode: if exhaustive { SamplingMode::Exhaustive } else { SamplingMode::Sampled },
                tuples_checked: checked,
                counterexample: Some(order),
            });
        }
    }
    Ok(ProductCheck {
        holds: true,
        mode: if exhaustive { SamplingMode::Exhaustive } else { SamplingMode::Sampled },
        tuples_checked: checked,
        counterexample: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductWitness {
    pub order: Vec<usize>,
    pub product: Matrix,
}

/// Ordered `k`-products of members with exponent above `k` that are TP
/// anyway. Members with exponent at most `k` are left out.
pub fn early_tp_product_scan(members: &[Matrix], k: usize, limits: &Limits) -> Result<Vec<ProductWitness>> {
    let mut eligible = Vec::new();
    for (x, a) in members.iter().enumerate() {
        if exponent_bruteforce_with(a, limits)?.r > k {
            eligible.push(x);
        }
    }
    if eligible.is_empty() || k == 0 {
        return Ok(Vec::new());
    }
    let count = tuple_count(eligible.len(), k).unwrap_or(usize::MAX);
    if count > MAX_PRODUCT_TUPLES {
        return Err(Error::FeasibilityExceeded {
            dim: count,
            cap: MAX_PRODUCT_TUPLES,
        });
    }
    let mut out = Vec::new();
    for order in itertools::repeat_n(eligible.iter().copied(), k).multi_cartesian_product() {
        let p = product(members, &order)?;
        if is_tp_with(&p, limits)?.holds {
            out.push(ProductWitness { order, product: p });
        }
    }
    Ok(out)
}
