//! Command-line front end for `oscillax`.
//!
//! Every subcommand produces one JSON document (or a plain-text rendering
//! with `--format text`) on stdout or `--output`; diagnostics go to stderr.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use oscillax::classify::{classify, OscillatoryMethod};
use oscillax::exponent::{exponent_bruteforce_with, exponent_via_theorem, predict_for, ExponentReport};
use oscillax::generate::{generate_z1, generate_z2, pair, random_diagonal, rng, PsiChoice};
use oscillax::planar::{build_network, export_dot, min_copies_lower_corner, minor_via_paths, Copies};
use oscillax::verify::{run_suite, Suite, VerifyOptions};
use oscillax::{compose, neville_factorize, Error, IndexSet, Limits, Matrix, SebFactorization};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "oscillax", version, about = "Exact analysis of totally nonnegative and oscillatory matrices")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Input file (matrix or factorization); stdin when omitted.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, env = "OSCILLAX_SEED")]
    pub seed: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Largest dimension for exhaustive minor scans.
    #[arg(long, global = true, default_value_t = Limits::DEFAULT_MAX_SCAN_DIM)]
    pub max_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// TN / TP / oscillation report for a matrix.
    Classify {
        /// Oscillation criteria to run; all of them by default.
        #[arg(long, value_enum, value_delimiter = ',')]
        method: Vec<MethodArg>,
    },
    /// Bidiagonal factorization of an I-TN matrix.
    Factorize {
        #[arg(long, value_enum, default_value_t = FormArg::Flat)]
        form: FormArg,
    },
    /// Exponent of an oscillatory matrix.
    Exponent {
        #[arg(long, value_enum, default_value_t = ExponentArg::Brute)]
        method: ExponentArg,
    },
    /// Planar network of a factorization (or of a matrix, factorized first).
    Network {
        /// Number of concatenated copies used for the corner table.
        #[arg(long, default_value_t = 1)]
        copies: usize,
        /// Write the network in DOT format to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Seeded lower part of a Z1 or Z2 class.
    Generate {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        /// Z2 only: present factors of the Psi bracket, e.g. "L4L3", or "random".
        #[arg(long, default_value = "random")]
        psi: String,
        /// Also draw a diagonal and a transposed upper part of the same class
        /// and emit the composed matrix.
        #[arg(long)]
        pair: bool,
    },
    /// Run self-check suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::Paper)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 5)]
        nmax: usize,
        #[arg(long, default_value_t = 10)]
        cases: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Definition,
    GantmacherKrein,
    Irreducible,
    Factorization,
}

impl From<MethodArg> for OscillatoryMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Definition => OscillatoryMethod::Definition,
            MethodArg::GantmacherKrein => OscillatoryMethod::GantmacherKrein,
            MethodArg::Irreducible => OscillatoryMethod::Irreducible,
            MethodArg::Factorization => OscillatoryMethod::Factorization,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Flat,
    Wq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExponentArg {
    Brute,
    Theorem,
    Predict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Z1,
    Z2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Paper,
    Z1,
    Z2,
    Theorem,
    Equivalence,
    Products,
    Bounds,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Paper => vec![Suite::Paper],
            SuiteArg::Z1 => vec![Suite::Z1],
            SuiteArg::Z2 => vec![Suite::Z2],
            SuiteArg::Theorem => vec![Suite::Theorem],
            SuiteArg::Equivalence => vec![Suite::Equivalence],
            SuiteArg::Products => vec![Suite::Products],
            SuiteArg::Bounds => vec![Suite::Bounds],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(PathBuf, io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        let CliError::Core(e) = self else { return 2 };
        match e {
            Error::Parse(_)
            | Error::MalformedNumber(_)
            | Error::ZeroDenominator(_)
            | Error::ShapeMismatch(_)
            | Error::MalformedFactorization(_)
            | Error::NotNormalizable(_) => 2,
            Error::FeasibilityExceeded { .. } => 3,
            Error::NotItn(_) | Error::NotTn(_) => 4,
            Error::NotOscillatory(_) => 5,
            Error::ParamOutOfRange(_)
            | Error::InvalidPsiPattern(_)
            | Error::OrderOutOfRange { .. }
            | Error::IndexOutOfRange(_)
            | Error::TrackMismatch(..)
            | Error::ClassMismatch(_) => 6,
            Error::MethodDisagreement(_) | Error::InvariantViolation(_) | Error::Unpredictable(_) => 1,
        }
    }

    pub fn kind(&self) -> String {
        match self {
            CliError::Core(e) => format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("Error").to_string(),
            CliError::Io(..) => "Io".into(),
        }
    }
}

/// Result of a successful run. `failed` marks a verification failure.
#[derive(Debug)]
pub struct Outcome {
    pub payload: Value,
    pub text: String,
    pub failed: bool,
}

impl Outcome {
    fn ok(command: &str, mut payload: Value, text: String) -> Self {
        let obj = payload.as_object_mut().expect("payloads are objects");
        obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
        obj.insert("command".into(), json!(command));
        obj.insert("status".into(), json!("ok"));
        Outcome {
            payload,
            text,
            failed: false,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.payload).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Text => self.text.clone(),
        }
    }
}

pub fn error_payload(err: &CliError) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "status": "error",
        "error": { "kind": err.kind(), "message": err.to_string() },
    })
}

fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Io(p.to_path_buf(), e)),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Io(PathBuf::from("<stdin>"), e))?;
            Ok(s)
        }
    }
}

/// A factorization in JSON or text form, or a matrix to factorize.
fn parse_factorization(text: &str) -> Result<SebFactorization, CliError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let value: Value = serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        if value.get("entries").is_some() {
            return Ok(neville_factorize(&Matrix::from_json_str(trimmed)?)?);
        }
        return Ok(SebFactorization::from_json_str(trimmed)?);
    }
    if trimmed.starts_with(['L', 'U', 'D']) {
        return Ok(SebFactorization::from_text(trimmed, None)?);
    }
    Ok(neville_factorize(&Matrix::from_text(text)?)?)
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let common = &cli.common;
    let limits = Limits {
        max_scan_dim: common.max_dim,
    };
    let seed = common.seed.unwrap_or(0);
    let input = || read_input(common.input.as_deref());
    match &cli.command {
        Command::Classify { method } => {
            let a = Matrix::from_text(&input()?)?;
            let methods: Vec<OscillatoryMethod> = if method.is_empty() {
                OscillatoryMethod::ALL.to_vec()
            } else {
                method.iter().map(|&m| m.into()).collect()
            };
            cmd_classify(&a, &methods, &limits)
        }
        Command::Factorize { form } => cmd_factorize(&Matrix::from_text(&input()?)?, *form),
        Command::Exponent { method } => cmd_exponent(&Matrix::from_text(&input()?)?, *method, &limits),
        Command::Network { copies, dot } => cmd_network(&parse_factorization(&input()?)?, *copies, dot.as_deref()),
        Command::Generate { class, n, s, psi, pair } => cmd_generate(*class, *n, *s, psi, *pair, seed),
        Command::Verify { suite, nmax, cases } => cmd_verify(*suite, *nmax, *cases, seed),
    }
}

pub fn cmd_classify(a: &Matrix, methods: &[OscillatoryMethod], limits: &Limits) -> Result<Outcome, CliError> {
    let report = classify(a, methods, limits)?;
    let text = format!(
        "tn: {}\ninvertible: {}\ntp: {}\noscillatory: {}\nbasic oscillatory: {}\n{}",
        report.is_tn,
        report.is_invertible,
        report.is_tp,
        report.is_oscillatory,
        report.is_basic_oscillatory.map_or("n/a".into(), |b| b.to_string()),
        report
            .witnesses
            .iter()
            .map(|w| format!("witness: A({}|{}) = {}\n", w.rows, w.cols, w.value))
            .collect::<String>()
    );
    let payload = serde_json::to_value(&report).expect("report serializes");
    Ok(Outcome::ok("classify", payload, text))
}

pub fn cmd_factorize(a: &Matrix, form: FormArg) -> Result<Outcome, CliError> {
    let f = neville_factorize(a)?;
    let (text, payload) = match form {
        FormArg::Flat => (
            f.to_string(),
            json!({ "form": "flat", "factorization": f, "text": f.to_string(), "class": f.classify() }),
        ),
        FormArg::Wq => {
            let wq = f.wq_form();
            (
                wq.to_string(),
                json!({ "form": "wq", "wq": wq, "packed": f.pack(), "text": wq.to_string(), "class": f.classify() }),
            )
        }
    };
    Ok(Outcome::ok("factorize", payload, text + "\n"))
}

fn exponent_text(rep: &ExponentReport) -> String {
    let mut s = format!(
        "r = {} (r_lower {}, r_upper {})\nL: {}\nU^T: {}\n",
        rep.r, rep.r_lower, rep.r_upper, rep.l_class, rep.u_class
    );
    if let Some(w) = &rep.zero_witness {
        let (rows, cols) = w.spec.index_sets(rep.n);
        s.push_str(&format!("A^{}({rows}|{cols}) = {}\n", rep.r - 1, w.value));
    }
    s
}

pub fn cmd_exponent(a: &Matrix, method: ExponentArg, limits: &Limits) -> Result<Outcome, CliError> {
    match method {
        ExponentArg::Brute | ExponentArg::Theorem => {
            let rep = if method == ExponentArg::Brute {
                exponent_bruteforce_with(a, limits)?
            } else {
                exponent_via_theorem(a)?
            };
            let payload = serde_json::to_value(&rep).expect("report serializes");
            Ok(Outcome::ok("exponent", payload, exponent_text(&rep)))
        }
        ExponentArg::Predict => {
            let f = neville_factorize(a)?;
            match predict_for(&f) {
                Ok(p) => {
                    let text = format!(
                        "{:?}\nL: {}\nU^T: {}\n",
                        p.prediction,
                        join_tags(&p.l_tags),
                        join_tags(&p.u_tags)
                    );
                    let payload = json!({ "method": "formula", "prediction": p.prediction, "l_tags": p.l_tags, "u_tags": p.u_tags });
                    Ok(Outcome::ok("exponent", payload, text))
                }
                Err(Error::Unpredictable(reason)) => {
                    let payload = json!({ "method": "formula", "prediction": null, "reason": reason });
                    Ok(Outcome::ok("exponent", payload, format!("no prediction: {reason}\n")))
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn join_tags(tags: &[oscillax::exponent::ClassTag]) -> String {
    tags.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn copies_value(c: Copies) -> Value {
    match c {
        Copies::Finite(w) => json!(w),
        Copies::Infinite => json!("infinite"),
    }
}

pub fn cmd_network(f: &SebFactorization, copies: usize, dot: Option<&Path>) -> Result<Outcome, CliError> {
    if copies == 0 {
        return Err(Error::ParamOutOfRange("--copies must be at least 1".into()).into());
    }
    let n = f.n();
    let net = build_network(f);
    let repeated = net.repeat(copies);
    let dot_text = export_dot(&net);
    if let Some(p) = dot {
        fs::write(p, &dot_text).map_err(|e| CliError::Io(p.to_path_buf(), e))?;
    }
    let mut table = Vec::new();
    let mut text = String::new();
    for size in 1..n {
        let lower = minor_via_paths(&repeated, &IndexSet::range(n - size + 1, n), &IndexSet::range(1, size))?;
        let upper = minor_via_paths(&repeated, &IndexSet::range(1, size), &IndexSet::range(n - size + 1, n))?;
        let min_copies = min_copies_lower_corner(&net, size)?;
        text.push_str(&format!(
            "size {size}: lower-left {lower}, upper-right {upper}, copies needed {}\n",
            match min_copies {
                Copies::Finite(w) => w.to_string(),
                Copies::Infinite => "infinite".into(),
            }
        ));
        table.push(json!({
            "size": size,
            "lower_left": lower,
            "lower_left_positive": lower.is_positive(),
            "upper_right": upper,
            "upper_right_positive": upper.is_positive(),
            "min_copies_lower_left": copies_value(min_copies),
        }));
    }
    let payload = json!({
        "n": n,
        "copies": copies,
        "layers": net.layers(),
        "diagonals": net.diagonal_count(),
        "corner_table": table,
        "dot": dot.map(|p| p.display().to_string()),
    });
    let text = if dot.is_some() { text } else { format!("{dot_text}{text}") };
    Ok(Outcome::ok("network", payload, text))
}

pub fn cmd_generate(class: ClassArg, n: usize, s: usize, psi: &str, paired: bool, seed: u64) -> Result<Outcome, CliError> {
    let psi = PsiChoice::parse(psi)?;
    let part = |seed: u64| match class {
        ClassArg::Z1 => generate_z1(n, s, seed),
        ClassArg::Z2 => generate_z2(n, s, &psi, seed),
    };
    let l = part(seed)?;
    let class_name = match class {
        ClassArg::Z1 => "z1",
        ClassArg::Z2 => "z2",
    };
    let mut payload = json!({
        "class": class_name,
        "n": n,
        "s": s,
        "seed": seed,
        "factorization": l,
        "text": l.to_string(),
    });
    let mut text = format!("{l}\n");
    if paired {
        let ut = part(seed.wrapping_add(1))?;
        let d = random_diagonal(n, &mut rng(seed.wrapping_add(2)));
        let full = pair(&l, d, &ut)?;
        let a = compose(&full);
        text.push_str(&format!("{full}\n{}", a.to_csv_string()));
        let obj = payload.as_object_mut().expect("object");
        obj.insert("paired".into(), json!(full));
        obj.insert("matrix".into(), serde_json::to_value(&a).expect("matrix serializes"));
    }
    Ok(Outcome::ok("generate", payload, text))
}

pub fn cmd_verify(suite: SuiteArg, nmax: usize, cases: usize, seed: u64) -> Result<Outcome, CliError> {
    let opts = VerifyOptions { nmax, cases, seed };
    let reports: Vec<_> = suite.suites().into_iter().map(|s| run_suite(s, &opts)).collect();
    let passed = reports.iter().all(|r| r.passed);
    let mut text = String::new();
    for r in &reports {
        text.push_str(&format!(
            "{}: {} ({} cases, {} failed)\n",
            r.suite,
            if r.passed { "pass" } else { "FAIL" },
            r.cases,
            r.failures.len()
        ));
        for f in &r.failures {
            text.push_str(&format!("  {} seed={:?}: {}\n", f.case, f.seed, f.detail));
        }
    }
    let payload = json!({ "passed": passed, "options": opts, "suites": reports });
    let mut out = Outcome::ok("verify", payload, text);
    out.failed = !passed;
    Ok(out)
}
