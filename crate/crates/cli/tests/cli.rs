use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use oscillax::corpus;
use oscillax::Matrix;
use serde_json::Value;
use tempfile::TempDir;

const EQ5_TEXT: &str = "L3(1) L2(2) L3(3) D(1,2,3) U3(2) U2(1) U3(1)";

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_oscillax"));
    cmd.env_remove("OSCILLAX_SEED");
    cmd
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn matrix_file(dir: &TempDir, name: &str, a: &Matrix) -> PathBuf {
    write(dir, name, &a.to_csv_string())
}

fn run(args: &[&str], input: Option<&Path>) -> (Output, Value) {
    let mut cmd = bin();
    cmd.args(args);
    if let Some(p) = input {
        cmd.arg("--input").arg(p);
    }
    let out = cmd.output().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out, json)
}

fn ok(args: &[&str], input: Option<&Path>) -> Value {
    let (out, json) = run(args, input);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["status"], "ok");
    json
}

fn code(args: &[&str], input: Option<&Path>) -> i32 {
    run(args, input).0.status.code().unwrap()
}

#[test]
fn classify_a1() {
    let dir = TempDir::new().unwrap();
    let p = matrix_file(&dir, "a1.csv", &corpus::a1());
    let v = ok(&["classify"], Some(&p));
    assert_eq!(v["is_tn"], true);
    assert_eq!(v["is_tp"], false);
    assert_eq!(v["is_oscillatory"], true);
}

#[test]
fn classify_identity_and_negative_minor() {
    let dir = TempDir::new().unwrap();
    let p = matrix_file(&dir, "id.csv", &Matrix::identity(3));
    let v = ok(&["classify"], Some(&p));
    assert_eq!(v["is_tn"], true);
    assert_eq!(v["is_oscillatory"], false);

    let p = write(&dir, "neg.json", r#"{"rows":2,"cols":2,"entries":[["1","2"],["3","4"]]}"#);
    let v = ok(&["classify", "--method", "gantmacher-krein"], Some(&p));
    assert_eq!(v["is_tn"], false);
    let w = &v["witnesses"][0];
    assert_eq!(w["rows"], serde_json::json!([1, 2]));
    assert_eq!(w["value"], "-2");
}

#[test]
fn factorize_eq5_identity_and_basic() {
    let dir = TempDir::new().unwrap();
    let p = matrix_file(&dir, "eq5.csv", &corpus::eq5_matrix());
    assert_eq!(ok(&["factorize"], Some(&p))["text"], EQ5_TEXT);

    let p = matrix_file(&dir, "id.csv", &Matrix::identity(3));
    assert_eq!(ok(&["factorize"], Some(&p))["text"], "D(1,1,1)");

    let p = matrix_file(&dir, "basic.csv", &corpus::basic_oscillatory_4x4());
    let v = ok(&["factorize", "--form", "wq"], Some(&p));
    assert_eq!(v["form"], "wq");
    assert!(v["packed"].is_object());
}

#[test]
fn exponent_4x4_routes() {
    let dir = TempDir::new().unwrap();
    let p = matrix_file(&dir, "e4.csv", &corpus::exponent_example_4x4());
    assert_eq!(ok(&["exponent"], Some(&p))["r"], 3);
    assert_eq!(ok(&["exponent", "--method", "theorem"], Some(&p))["r"], 3);
    let v = ok(&["exponent", "--method", "predict"], Some(&p));
    assert_eq!(v["prediction"]["exact"], 3);
    assert_eq!(v["l_tags"][0]["family"], "Z1");
    assert_eq!(v["l_tags"][0]["s"], 2);
    assert_eq!(v["u_tags"][0]["s"], 3);
}

#[test]
fn exponent_of_tp_matrix_is_one() {
    let dir = TempDir::new().unwrap();
    let tp = Matrix::from_ints(&[[1, 1, 1], [1, 2, 3], [1, 3, 6]]);
    let p = matrix_file(&dir, "tp.csv", &tp);
    assert_eq!(ok(&["exponent"], Some(&p))["r"], 1);
    assert_eq!(ok(&["exponent", "--method", "theorem"], Some(&p))["r"], 1);
    assert_eq!(ok(&["exponent", "--method", "predict"], Some(&p))["prediction"]["exact"], 1);
}

#[test]
fn exponent_rejects_non_oscillatory() {
    let dir = TempDir::new().unwrap();
    let p = matrix_file(&dir, "id.csv", &Matrix::identity(3));
    assert_eq!(code(&["exponent"], Some(&p)), 5);
}

#[test]
fn network_eq5_dot_golden() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "eq5.txt", EQ5_TEXT);
    let dot = dir.path().join("eq5.dot");
    let v = ok(&["network", "--dot", dot.to_str().unwrap()], Some(&p));
    assert_eq!(v["diagonals"], 6);
    let got = fs::read_to_string(&dot).unwrap();
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/eq5.dot");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&golden, &got).unwrap();
    }
    assert_eq!(got, fs::read_to_string(golden).unwrap());
}

#[test]
fn network_jacobi_two_copies_corners() {
    let dir = TempDir::new().unwrap();
    let p = matrix_file(&dir, "jac.csv", &corpus::jacobi(4));
    let v = ok(&["network", "--copies", "2"], Some(&p));
    let table = v["corner_table"].as_array().unwrap();
    assert_eq!(table.len(), 3);
    assert_eq!(table[0]["lower_left"], "0");
    assert_eq!(table[0]["min_copies_lower_left"], 3);
    assert_eq!(table[2]["lower_left_positive"], true);
}

#[test]
fn network_of_diagonal_has_only_horizontal_edges() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "d.txt", "D(1,2,3)");
    let dot = dir.path().join("d.dot");
    let v = ok(&["network", "--dot", dot.to_str().unwrap()], Some(&p));
    assert_eq!(v["diagonals"], 0);
    assert_eq!(v["corner_table"][0]["min_copies_lower_left"], "infinite");
    let text = fs::read_to_string(dot).unwrap();
    assert!(text.contains("[label=\"3\"]"));
    assert!(!text.contains("c0_t3 -> c1_t2"));
}

#[test]
fn generate_is_deterministic_and_seed_env_is_honoured() {
    let args = ["generate", "--class", "z1", "--n", "5", "--s", "3", "--seed", "7"];
    assert_eq!(ok(&args, None), ok(&args, None));

    let env = bin()
        .env("OSCILLAX_SEED", "7")
        .args(["generate", "--class", "z1", "--n", "5", "--s", "3"])
        .output()
        .unwrap();
    let env: Value = serde_json::from_slice(&env.stdout).unwrap();
    assert_eq!(env, ok(&args, None));

    let other = ok(&["generate", "--class", "z1", "--n", "5", "--s", "3", "--seed", "8"], None);
    assert_ne!(other["text"], ok(&args, None)["text"]);
}

#[test]
fn generate_z2_psi_l4_is_jacobi_shaped() {
    let v = ok(&["generate", "--class", "z2", "--n", "5", "--s", "5", "--psi", "L4"], None);
    let text = v["text"].as_str().unwrap();
    let kinds: Vec<&str> = text.split_whitespace().map(|f| &f[..2]).collect();
    assert_eq!(kinds, ["L2", "L3", "L4", "L5", "D("]);
}

#[test]
fn generate_pair_is_oscillatory() {
    let dir = TempDir::new().unwrap();
    let v = ok(&["generate", "--class", "z2", "--n", "4", "--s", "3", "--pair", "--seed", "3"], None);
    let p = write(&dir, "pair.json", &v["matrix"].to_string());
    let c = ok(&["classify"], Some(&p));
    assert_eq!(c["is_oscillatory"], true);
}

#[test]
fn generate_bad_parameters_exit_6() {
    assert_eq!(code(&["generate", "--class", "z1", "--n", "4", "--s", "9"], None), 6);
    assert_eq!(code(&["generate", "--class", "z2", "--n", "4", "--s", "3", "--psi", "L1"], None), 6);
}

#[test]
fn verify_paper_and_small_sweep() {
    let v = ok(&["verify", "--suite", "paper"], None);
    assert_eq!(v["passed"], true);
    let v = ok(&["verify", "--suite", "all", "--nmax", "3", "--cases", "3"], None);
    assert_eq!(v["suites"].as_array().unwrap().len(), 7);
}

#[test]
fn parse_errors_exit_2_with_error_payload() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.csv", "1,2\n3,x\n");
    let (out, json) = run(&["classify"], Some(&p));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json["status"], "error");
    assert_eq!(code(&["factorize"], Some(&write(&dir, "ragged.csv", "1,2\n3\n"))), 2);
}

#[test]
fn oversized_scan_exits_3() {
    let dir = TempDir::new().unwrap();
    let p = matrix_file(&dir, "id.csv", &Matrix::identity(4));
    assert_eq!(code(&["classify", "--max-dim", "3"], Some(&p)), 3);
}

#[test]
fn text_format_and_output_file() {
    let dir = TempDir::new().unwrap();
    let p = matrix_file(&dir, "eq5.csv", &corpus::eq5_matrix());
    let out = dir.path().join("out.txt");
    let (status, _) = run(
        &["factorize", "--format", "text", "--output", out.to_str().unwrap()],
        Some(&p),
    );
    assert!(status.status.success());
    assert_eq!(fs::read_to_string(out).unwrap().trim(), EQ5_TEXT);
}
