//! Acceptance criteria, one line per criterion. Exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use oscillax::corpus;
use oscillax::exponent::exponent_bruteforce;
use oscillax::verify::{run_suite, Suite, SuiteReport, VerifyOptions};

const SEED: u64 = 20_240_601;
type Criterion = (&'static str, fn() -> (bool, String));

fn opts(nmax: usize, cases: usize) -> VerifyOptions {
    VerifyOptions { nmax, cases, seed: SEED }
}

fn summarize(reports: &[SuiteReport]) -> (bool, String) {
    let passed = reports.iter().all(|r| r.passed);
    let mut parts: Vec<String> = reports
        .iter()
        .map(|r| format!("{} {}/{}", r.suite, r.cases - r.failures.len(), r.cases))
        .collect();
    if let Some(f) = reports.iter().flat_map(|r| &r.failures).next() {
        parts.push(format!("first failure {} (seed {:?}): {}", f.case, f.seed, f.detail));
    }
    (passed, parts.join(", "))
}

fn regression_corpus() -> (bool, String) {
    let start = Instant::now();
    let (passed, detail) = summarize(&[run_suite(Suite::Paper, &opts(0, 0))]);
    let secs = start.elapsed().as_secs_f64();
    (passed && secs < 10.0, format!("{detail}, {secs:.2}s"))
}

fn formula_suite() -> (bool, String) {
    summarize(&[run_suite(Suite::Z1, &opts(7, 20)), run_suite(Suite::Z2, &opts(6, 20))])
}

fn theorem_suite() -> (bool, String) {
    summarize(&[run_suite(Suite::Theorem, &opts(7, 200))])
}

fn equivalence_suites() -> (bool, String) {
    summarize(&[run_suite(Suite::Equivalence, &opts(5, 100))])
}

fn product_corollary() -> (bool, String) {
    summarize(&[run_suite(Suite::Products, &opts(5, 20))])
}

/// Every oscillatory instance of the other suites is already held to
/// `r <= n-1`; this adds the corpus and a dedicated sweep.
fn exponent_bound() -> (bool, String) {
    let corpus = [
        corpus::basic_oscillatory_4x4(),
        corpus::a1(),
        corpus::exponent_example_4x4(),
        corpus::exponent_example_5x5(),
        corpus::bound_example_3x3(),
        corpus::jacobi(6),
    ]
    .into_iter()
    .chain(corpus::product_family())
    .chain(corpus::early_tp_pair());
    let mut checked = 0;
    for a in corpus {
        checked += 1;
        match exponent_bruteforce(&a) {
            Ok(rep) if rep.r < rep.n => {}
            Ok(rep) => return (false, format!("corpus matrix with r = {} and n = {}", rep.r, rep.n)),
            Err(e) => return (false, format!("corpus matrix: {e}")),
        }
    }
    let (passed, detail) = summarize(&[run_suite(Suite::Bounds, &opts(6, 100))]);
    (passed, format!("corpus {checked}/{checked}, {detail}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("regression corpus", regression_corpus),
        ("formula suite", formula_suite),
        ("theorem suite", theorem_suite),
        ("equivalence suites", equivalence_suites),
        ("product corollary", product_corollary),
        ("exponent bound", exponent_bound),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (passed, detail) = run();
        if !passed {
            failed += 1;
        }
        println!(
            "criterion {}: {} [{}] {} ({:.1}s)",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            name,
            detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
