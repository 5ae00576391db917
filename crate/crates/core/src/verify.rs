//! Self-check suites: the reference corpus and seeded property sweeps.
//!
//! Every case derives its own seed from the run seed, so a failure can be
//! replayed from the seed recorded in the report.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::classify::{is_oscillatory_with, is_tn, is_tp, is_tp_given_tn, oscillatory_consensus, Corner};
use crate::error::{Error, Result};
use crate::exponent::{
    corner_exponent, corner_exponents_via_network, exponent_bruteforce, exponent_via_theorem, mu1, mu2,
    predict_exponent, predict_for, product_family_check, psi_membership, psi_patterns, r_lower, ClassTag,
    Prediction,
};
use crate::generate::{generate_oscillatory, generate_z1, generate_z2, pair, random_diagonal, random_factorization, random_matrix, rng, PsiChoice};
use crate::matrix::{cauchy_binet_check, mat_mul, mat_pow, minor, IndexSet, Limits, Matrix};
use crate::planar::{build_network, minor_via_paths, Copies};
use crate::rational::Rational;
use crate::seb::{compose, neville_factorize, SebFactorization};
use crate::{classify::OscillatoryMethod, corpus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Paper,
    Z1,
    Z2,
    Theorem,
    Equivalence,
    Products,
    Bounds,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Paper,
        Suite::Z1,
        Suite::Z2,
        Suite::Theorem,
        Suite::Equivalence,
        Suite::Products,
        Suite::Bounds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Paper => "paper",
            Suite::Z1 => "z1",
            Suite::Z2 => "z2",
            Suite::Theorem => "theorem",
            Suite::Equivalence => "equivalence",
            Suite::Products => "products",
            Suite::Bounds => "bounds",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::ParamOutOfRange(format!("unknown suite {s:?}")))
    }
}

/// Sweep parameters. `cases` is per parameter cell for the formula suites
/// and the total for the others.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    pub nmax: usize,
    pub cases: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            nmax: 5,
            cases: 10,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseFailure {
    pub case: String,
    pub seed: Option<u64>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub failures: Vec<CaseFailure>,
    pub passed: bool,
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: Vec<CaseFailure>,
}

type Check = std::result::Result<(), String>;
type NamedCheck = (&'static str, fn() -> Check);

impl Tally {
    fn record(&mut self, case: impl Into<String>, seed: Option<u64>, outcome: Check) {
        self.cases += 1;
        if let Err(detail) = outcome {
            self.failures.push(CaseFailure {
                case: case.into(),
                seed,
                detail,
            });
        }
    }

    fn finish(self, suite: Suite) -> SuiteReport {
        SuiteReport {
            suite,
            cases: self.cases,
            passed: self.failures.is_empty(),
            failures: self.failures,
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// SplitMix64 step over the run seed and the case coordinates.
pub fn case_seed(base: u64, coords: &[u64]) -> u64 {
    coords.iter().fold(base, |acc, &c| {
        let mut z = acc ^ c.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    })
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> SuiteReport {
    match suite {
        Suite::Paper => paper_suite(),
        Suite::Z1 => z1_suite(opts),
        Suite::Z2 => z2_suite(opts),
        Suite::Theorem => theorem_suite(opts),
        Suite::Equivalence => equivalence_suite(opts),
        Suite::Products => products_suite(opts),
        Suite::Bounds => bounds_suite(opts),
    }
}

fn set(v: &[usize], n: usize) -> IndexSet {
    IndexSet::new(v.to_vec(), n).expect("literal index set")
}

fn printed(text: &str, a: &Matrix) -> Check {
    let f = lift(SebFactorization::from_text(text, None))?;
    ensure(&compose(&f) == a, || format!("{text} does not compose to the matrix"))?;
    let g = lift(neville_factorize(a))?;
    ensure(g == f, || format!("factorization {g} differs from {text}"))
}

fn tp(a: &Matrix) -> std::result::Result<bool, String> {
    Ok(lift(is_tp(a))?.holds)
}

fn check_eq5() -> Check {
    let a = corpus::eq5_matrix();
    let f = lift(neville_factorize(&a))?;
    let ints = |v: &[i64]| v.iter().map(|&x| Rational::from(x)).collect::<Vec<_>>();
    ensure(f.l() == ints(&[1, 2, 3]).as_slice(), || format!("l = {:?}", f.l()))?;
    ensure(f.d() == ints(&[1, 2, 3]).as_slice(), || format!("d = {:?}", f.d()))?;
    ensure(f.u() == ints(&[2, 1, 1]).as_slice(), || format!("u = {:?}", f.u()))?;
    ensure(f.to_string() == "L3(1) L2(2) L3(3) D(1,2,3) U3(2) U2(1) U3(1)", || f.to_string())?;
    ensure(build_network(&f).diagonal_count() == 6, || "network diagonal count".into())
}

fn check_basic_oscillatory() -> Check {
    let a = corpus::basic_oscillatory_4x4();
    printed("L3(1) L2(2) L4(3) D(1,1,1,1) U3(4) U4(5) U2(6)", &a)?;
    let report = lift(crate::classify::classify(&a, &OscillatoryMethod::ALL, &Limits::default()))?;
    ensure(report.is_basic_oscillatory == Some(true) && report.is_oscillatory, || format!("{report:?}"))
}

fn check_a1() -> Check {
    let a = corpus::a1();
    let net = build_network(&lift(neville_factorize(&a))?);
    let tenth = Rational::new(1, 10).expect("literal");
    let cases: [(&[usize], &[usize], Rational); 3] = [
        (&[2], &[4], tenth),
        (&[2], &[2], Rational::from(4)),
        (&[1, 3], &[2, 3], Rational::from(5)),
    ];
    for (rows, cols, expected) in cases {
        let (r, c) = (set(rows, 4), set(cols, 4));
        let algebraic = lift(minor(&a, &r, &c))?;
        let paths = lift(minor_via_paths(&net, &r, &c))?;
        ensure(algebraic == expected && paths == expected, || {
            format!("A({r}|{c}): minor {algebraic}, paths {paths}, expected {expected}")
        })?;
    }
    ensure(lift(is_tn(&a))?.holds && !tp(&a)?, || "A1 should be TN but not TP".into())
}

fn check_exponent_4x4() -> Check {
    let a = corpus::exponent_example_4x4();
    printed("L4(1) L3(3) L2(2) D(1,1,1,1) U3(1) U4(2) U2(1) U3(2) U4(1)", &a)?;
    let a2 = lift(mat_pow(&a, 2))?;
    let expected = Matrix::from_ints(&[
        [27, 40, 97, 133],
        [104, 155, 377, 520],
        [336, 501, 1219, 1683],
        [342, 510, 1241, 1714],
    ]);
    ensure(a2 == expected, || format!("A^2 = {a2}"))?;
    let corner = lift(minor(&a2, &set(&[2, 3, 4], 4), &set(&[1, 2, 3], 4)))?;
    ensure(corner.is_zero(), || format!("(A^2)({{2,3,4}}|{{1,2,3}}) = {corner}"))?;
    let brute = lift(exponent_bruteforce(&a))?;
    ensure(brute.r == 3, || format!("r = {}", brute.r))?;
    let theorem = lift(exponent_via_theorem(&a))?;
    ensure((theorem.r_lower, theorem.r_upper) == (3, 2), || format!("theorem {theorem:?}"))?;
    let predicted = lift(predict_for(&lift(neville_factorize(&a))?))?;
    ensure(predicted.l_tags[0] == ClassTag::z1(4, 2) && predicted.u_tags[0] == ClassTag::z1(4, 3), || {
        format!("tags {} / {}", predicted.l_tags[0], predicted.u_tags[0])
    })?;
    ensure(predicted.prediction == Prediction::Exact(3), || format!("{:?}", predicted.prediction))
}

fn check_exponent_5x5() -> Check {
    let a = corpus::exponent_example_5x5();
    printed(
        "L2(2) L5(3) L4(4) L3(2) L5(2) L4(1) L5(2) D(1,1,1,1,1) U5(1) U4(2) U5(3) U3(3) U2(2)",
        &a,
    )?;
    let packed = lift(neville_factorize(&a))?.pack();
    let ints = |v: &[i64]| v.iter().map(|&x| Rational::from(x)).collect::<Vec<_>>();
    ensure(
        *packed.l_vector(3) == ints(&[3, 4, 2]) && *packed.l_vector(4) == ints(&[2, 1]) && *packed.l_vector(5) == ints(&[2]),
        || "packed lower vectors".into(),
    )?;
    let a2 = lift(mat_pow(&a, 2))?;
    ensure(a2[(0, 3)].is_zero(), || format!("A^2(1,4) = {}", a2[(0, 3)]))?;
    let brute = lift(exponent_bruteforce(&a))?;
    ensure(brute.r == 3, || format!("r = {}", brute.r))?;
    let theorem = lift(exponent_via_theorem(&a))?;
    ensure((theorem.r_lower, theorem.r_upper) == (2, 3), || format!("theorem {theorem:?}"))?;
    let predicted = lift(predict_for(&lift(neville_factorize(&a))?))?;
    ensure(predicted.prediction == Prediction::Exact(3), || format!("{:?}", predicted.prediction))
}

fn check_product_family() -> Check {
    let [a1, a2] = corpus::product_family();
    printed("L4(2.5) L3(1) L2(4) L4(5.5) L3(6.5) L4(1) D(2,1,3,5) U3(1) U4(2) U2(4) U3(2) U4(3)", &a1)?;
    printed("L4(5) L3(3) L2(2) L4(6) L3(2.5) L4(2) D(1,2,3,4) U3(2) U4(1) U2(2) U3(4) U4(3)", &a2)?;
    for a in [&a1, &a2] {
        let r = lift(exponent_bruteforce(a))?.r;
        ensure(r == 2, || format!("member exponent {r}"))?;
    }
    for (x, y) in [(&a1, &a1), (&a2, &a2), (&a1, &a2), (&a2, &a1)] {
        ensure(tp(&lift(mat_mul(x, y))?)?, || "two-member product not TP".into())?;
    }
    let family = [lift(neville_factorize(&a1))?, lift(neville_factorize(&a2))?];
    let limits = Limits::default();
    ensure(lift(product_family_check(&family, 2, 0, &limits))?.holds, || "k = 2 should hold".into())?;
    ensure(!lift(product_family_check(&family, 1, 0, &limits))?.holds, || "k = 1 should fail".into())
}

fn check_early_pair() -> Check {
    let [a1, a2] = corpus::early_tp_pair();
    printed("L4(2) L3(1) L2(3) D(1,1,1,1) U3(1) U4(1) U2(1) U3(2) U4(3)", &a1)?;
    printed("L4(1) L3(3) L2(2) L4(1) L3(2) D(1,1,1,1) U2(3) U3(1) U4(2)", &a2)?;
    for a in [&a1, &a2] {
        let r = lift(exponent_bruteforce(a))?.r;
        ensure(r == 3, || format!("member exponent {r}"))?;
    }
    ensure(tp(&lift(mat_mul(&a1, &a2))?)? && tp(&lift(mat_mul(&a2, &a1))?)?, || "cross products not TP".into())
}

fn check_bound_example() -> Check {
    let a = corpus::bound_example_3x3();
    printed("L2(1) L3(2) D(1,1,1) U3(2) U2(1) U3(4)", &a)?;
    let z = ClassTag::z2(3, 3, vec![2]);
    let extra = z.clone().with_extras(vec![crate::seb::EbFactor::Lower { i: 3, q: 4.into() }]);
    let bound = lift(predict_exponent(&z, &extra))?;
    let r = lift(exponent_bruteforce(&a))?.r;
    ensure(bound == Prediction::UpperBound(2) && r == 2, || format!("bound {bound:?}, r = {r}"))
}

fn check_small_facts() -> Check {
    for n in 2..=7 {
        ensure(lift(mu1(n, n))? == 1 && lift(mu1(n, 2))? == n - 1, || format!("mu1 at n = {n}"))?;
    }
    ensure(lift(mu2(5, 4))? == 3, || "mu2(5, 4)".into())?;
    let q = |v: &[i64]| v.iter().map(|&x| Rational::from(x)).collect::<Vec<_>>();
    ensure(psi_membership(&q(&[0, 2])) && psi_membership(&q(&[1, 0, 1, 1])), || "psi membership".into())?;
    let j = corpus::jacobi(4);
    let j2 = lift(mat_pow(&j, 2))?;
    ensure(j2[(3, 0)].is_zero() && j2[(0, 3)].is_zero(), || "Jacobi corners of A^(n-2)".into())?;
    ensure(lift(r_lower(&j))? == 3 && lift(exponent_bruteforce(&j))?.r == 3, || "Jacobi exponent".into())
}

fn paper_suite() -> SuiteReport {
    let mut t = Tally::default();
    let checks: [NamedCheck; 9] = [
        ("eq5_factorization", check_eq5),
        ("basic_oscillatory_factorization", check_basic_oscillatory),
        ("a1_minors_and_paths", check_a1),
        ("exponent_4x4", check_exponent_4x4),
        ("exponent_5x5", check_exponent_5x5),
        ("product_family", check_product_family),
        ("early_tp_pair", check_early_pair),
        ("bound_3x3", check_bound_example),
        ("mu_psi_jacobi", check_small_facts),
    ];
    for (name, check) in checks {
        t.record(name, None, check());
    }
    t.finish(Suite::Paper)
}

fn lower_exponent(f: &SebFactorization) -> std::result::Result<Option<usize>, String> {
    lift(corner_exponent(&compose(&f.lower_part()), Corner::LowerLeft))
}

fn z1_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut t = Tally::default();
    for n in 3..=opts.nmax {
        for s in 2..=n {
            let expected = mu1(n, s).expect("s in range");
            for c in 0..opts.cases {
                let seed = case_seed(opts.seed, &[1, n as u64, s as u64, c as u64]);
                let outcome = lift(generate_z1(n, s, seed)).and_then(|f| {
                    let got = lower_exponent(&f)?;
                    ensure(got == Some(expected), || format!("r_lower {got:?}, mu1 {expected}"))
                });
                t.record(format!("z1 n={n} s={s} #{c}"), Some(seed), outcome);
            }
        }
    }
    t.finish(Suite::Z1)
}

fn z2_choices(n: usize, s: usize) -> Vec<PsiChoice> {
    if s == 2 {
        vec![PsiChoice::Random]
    } else {
        psi_patterns(n, s - 1).into_iter().map(PsiChoice::Present).collect()
    }
}

fn z2_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut t = Tally::default();
    for n in 3..=opts.nmax.min(6) {
        for s in 2..=n {
            let expected = mu2(n, s).expect("s in range");
            for (p, psi) in z2_choices(n, s).into_iter().enumerate() {
                for c in 0..opts.cases {
                    let seed = case_seed(opts.seed, &[2, n as u64, s as u64, p as u64, c as u64]);
                    let outcome = lift(generate_z2(n, s, &psi, seed)).and_then(|f| {
                        let got = lower_exponent(&f)?;
                        ensure(got == Some(expected), || format!("r_lower {got:?}, mu2 {expected}"))
                    });
                    t.record(format!("z2 n={n} s={s} psi={psi:?} #{c}"), Some(seed), outcome);
                }
            }
        }
    }
    t.finish(Suite::Z2)
}

fn dims(opts: &VerifyOptions, cap: usize) -> Vec<usize> {
    (3..=opts.nmax.min(cap).max(3)).collect()
}

fn theorem_case(n: usize, seed: u64) -> Check {
    let f = generate_oscillatory(n, seed);
    let a = compose(&f);
    let brute = lift(exponent_bruteforce(&a))?;
    let theorem = lift(exponent_via_theorem(&a))?;
    ensure(brute.r == theorem.r, || format!("brute {} vs theorem {}", brute.r, theorem.r))?;
    ensure(brute.r < n, || format!("r = {} exceeds n-1", brute.r))?;
    let (lower, upper) = lift(corner_exponents_via_network(&f))?;
    ensure(
        lower == Copies::Finite(brute.r_lower) && upper == Copies::Finite(brute.r_upper),
        || format!("network copies {lower:?}/{upper:?} vs {}/{}", brute.r_lower, brute.r_upper),
    )?;
    let mut g = rng(seed ^ 0x5eed);
    let zeroed = lift(SebFactorization::new(
        n,
        f.l().to_vec(),
        random_diagonal(n, &mut g),
        vec![Rational::zero(); f.u().len()],
    ))?;
    let stripped = lift(corner_exponent(&compose(&zeroed), Corner::LowerLeft))?;
    ensure(stripped == Some(brute.r_lower), || {
        format!("r_lower {} changes to {stripped:?} without the U side", brute.r_lower)
    })
}

fn theorem_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut t = Tally::default();
    let ns = dims(opts, usize::MAX);
    for c in 0..opts.cases {
        let n = ns[c % ns.len()];
        let seed = case_seed(opts.seed, &[3, c as u64]);
        t.record(format!("theorem n={n} #{c}"), Some(seed), theorem_case(n, seed));
    }
    t.finish(Suite::Theorem)
}

fn equivalence_case(n: usize, seed: u64, tn_source: bool) -> Check {
    let a = if tn_source {
        compose(&random_factorization(n, 0.4, seed))
    } else {
        random_matrix(n, n, -2..=9, seed)
    };
    let full = lift(is_tp(&a))?.holds;
    if lift(is_tn(&a))?.holds {
        let corner = lift(is_tp_given_tn(&a))?;
        ensure(corner == full, || format!("corner test {corner}, full scan {full}"))?;
        if let Ok(f) = neville_factorize(&a) {
            let net = build_network(&f);
            for k in 1..=n {
                for rows in IndexSet::all(n, k) {
                    for cols in IndexSet::all(n, k) {
                        let (x, y) = (lift(minor(&a, &rows, &cols))?, lift(minor_via_paths(&net, &rows, &cols))?);
                        ensure(x == y, || format!("({rows}|{cols}): minor {x}, paths {y}"))?;
                    }
                }
            }
        }
    }
    lift(oscillatory_consensus(&a)).map(|_| ())
}

fn cauchy_binet_case(seed: u64) -> Check {
    let mut g = rng(seed);
    let (p, q, r) = (g.gen_range(2..=4), g.gen_range(2..=4), g.gen_range(2..=4));
    let a = random_matrix(p, q, -5..=5, seed ^ 1);
    let b = random_matrix(q, r, -5..=5, seed ^ 2);
    for alpha in IndexSet::all(p, 2) {
        for beta in IndexSet::all(r, 2) {
            ensure(lift(cauchy_binet_check(&a, &b, &alpha, &beta))?, || format!("({alpha}|{beta})"))?;
        }
    }
    Ok(())
}

/// `cases` square matrices alternating between composed factorizations and
/// unconstrained integer matrices, plus `cases / 2` Cauchy-Binet pairs.
fn equivalence_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut t = Tally::default();
    let ns: Vec<usize> = (2..=opts.nmax.clamp(2, 5)).collect();
    for c in 0..opts.cases {
        let n = ns[c % ns.len()];
        let seed = case_seed(opts.seed, &[4, c as u64]);
        t.record(format!("equivalence n={n} #{c}"), Some(seed), equivalence_case(n, seed, c % 2 == 0));
    }
    for c in 0..opts.cases.div_ceil(2) {
        let seed = case_seed(opts.seed, &[5, c as u64]);
        t.record(format!("cauchy-binet #{c}"), Some(seed), cauchy_binet_case(seed));
    }
    t.finish(Suite::Equivalence)
}

/// A lower part drawn from a random pure class, and its tag.
fn random_class_part(n: usize, g: &mut impl Rng) -> (ClassTag, PsiChoice) {
    let s = g.gen_range(2..=n);
    if g.gen_bool(0.5) || s == 2 {
        if g.gen_bool(0.5) {
            return (ClassTag::z1(n, s), PsiChoice::Random);
        }
        return (ClassTag::z2(n, 2, Vec::new()), PsiChoice::Random);
    }
    let patterns = psi_patterns(n, s - 1);
    let p = patterns[g.gen_range(0..patterns.len())].clone();
    (ClassTag::z2(n, s, p.clone()), PsiChoice::Present(p))
}

fn build_part(tag: &ClassTag, psi: &PsiChoice, seed: u64) -> Result<SebFactorization> {
    let s = tag.s.expect("pure tags carry s");
    match tag.family {
        crate::exponent::ClassFamily::Z1 => generate_z1(tag.n, s, seed),
        _ => generate_z2(tag.n, s, psi, seed),
    }
}

fn products_case(n: usize, seed: u64) -> Check {
    let mut g = rng(seed);
    let (lt, lp) = random_class_part(n, &mut g);
    let (ut, up) = random_class_part(n, &mut g);
    let members = (0..2u64)
        .map(|m| {
            let l = build_part(&lt, &lp, case_seed(seed, &[m, 0]))?;
            let u = build_part(&ut, &up, case_seed(seed, &[m, 1]))?;
            pair(&l, random_diagonal(n, &mut g), &u)
        })
        .collect::<Result<Vec<_>>>();
    let members = lift(members)?;
    let k = lt.mu().expect("pure").max(ut.mu().expect("pure"));
    let limits = Limits::default();
    let at = lift(product_family_check(&members, k, seed, &limits))?;
    ensure(at.holds, || format!("{lt} / {ut}: k = {k} fails at {:?}", at.counterexample))?;
    if k > 1 {
        let below = lift(product_family_check(&members, k - 1, seed, &limits))?;
        ensure(!below.holds, || format!("{lt} / {ut}: k = {} already TP", k - 1))?;
    }
    Ok(())
}

fn products_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut t = Tally::default();
    let ns = dims(opts, 5);
    for c in 0..opts.cases {
        let n = ns[c % ns.len()];
        let seed = case_seed(opts.seed, &[6, c as u64]);
        t.record(format!("products n={n} #{c}"), Some(seed), products_case(n, seed));
    }
    t.finish(Suite::Products)
}

fn bounds_case(n: usize, seed: u64) -> Check {
    let mut g = rng(seed);
    let (lt, lp) = random_class_part(n, &mut g);
    let (ut, up) = random_class_part(n, &mut g);
    let mut l = lift(build_part(&lt, &lp, case_seed(seed, &[0])))?;
    let u = lift(build_part(&ut, &up, case_seed(seed, &[1])))?;
    let zeros: Vec<usize> = (0..l.l().len()).filter(|&p| l.l()[p].is_zero()).collect();
    if !zeros.is_empty() {
        let mut values = l.l().to_vec();
        for _ in 0..g.gen_range(1..=zeros.len().min(2)) {
            values[zeros[g.gen_range(0..zeros.len())]] = Rational::from(g.gen_range(1i64..=9));
        }
        l = lift(SebFactorization::new(n, values, l.d().to_vec(), l.u().to_vec()))?;
    }
    let f = lift(pair(&l, random_diagonal(n, &mut g), &u))?;
    let a = compose(&f);
    ensure(lift(is_oscillatory_with(&a, OscillatoryMethod::GantmacherKrein, &Limits::default()))?, || {
        "instance is not oscillatory".into()
    })?;
    let r = lift(exponent_bruteforce(&a))?.r;
    ensure(r < n, || format!("r = {r} exceeds n-1"))?;
    match predict_for(&f) {
        Ok(p) => match p.prediction {
            Prediction::Exact(v) => ensure(r == v, || format!("r = {r}, exact prediction {v}")),
            Prediction::UpperBound(v) => ensure(r <= v, || format!("r = {r} above bound {v}")),
        },
        Err(Error::Unpredictable(_)) => Ok(()),
        Err(e) => Err(e.to_string()),
    }
}

/// Pure class pairs with extra lower factors: brute force never exceeds the
/// predicted bound nor `n-1`. Generic oscillatory instances are also held to
/// `r <= n-1`.
fn bounds_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut t = Tally::default();
    let ns = dims(opts, 6);
    for c in 0..opts.cases {
        let n = ns[c % ns.len()];
        let seed = case_seed(opts.seed, &[7, c as u64]);
        t.record(format!("bounds n={n} #{c}"), Some(seed), bounds_case(n, seed));
        let seed = case_seed(opts.seed, &[8, c as u64]);
        let outcome = lift(exponent_bruteforce(&compose(&generate_oscillatory(n, seed))))
            .and_then(|rep| ensure(rep.r < n, || format!("r = {} exceeds n-1", rep.r)));
        t.record(format!("gk-bound n={n} #{c}"), Some(seed), outcome);
    }
    t.finish(Suite::Bounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_suite_passes() {
        let rep = run_suite(Suite::Paper, &VerifyOptions::default());
        assert!(rep.passed, "{:#?}", rep.failures);
        assert_eq!(rep.cases, 9);
    }

    #[test]
    fn small_sweeps_pass() {
        let opts = VerifyOptions {
            nmax: 4,
            cases: 3,
            seed: 11,
        };
        for suite in Suite::ALL {
            let rep = run_suite(suite, &opts);
            assert!(rep.passed, "{suite}: {:#?}", rep.failures);
            assert!(rep.cases > 0);
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn case_seeds_are_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|c| case_seed(0, &[1, c])).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(case_seed(5, &[1, 2]), case_seed(5, &[1, 2]));
    }

    #[test]
    fn failures_are_reported_with_seed() {
        let mut t = Tally::default();
        t.record("ok", Some(1), Ok(()));
        t.record("bad", Some(2), Err("broken".into()));
        let rep = t.finish(Suite::Bounds);
        assert!(!rep.passed);
        assert_eq!(rep.cases, 2);
        assert_eq!(rep.failures[0].seed, Some(2));
    }
}
