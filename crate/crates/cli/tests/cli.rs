use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn grouptest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grouptest")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not json ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn scalar_file(dir: &Path, name: &str, values: &[(f64, f64)]) -> PathBuf {
    let mut text = format!("scalar {}\n", values.len());
    for (re, im) in values {
        text.push_str(&format!("{re} {im}\n"));
    }
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn identity_matrices(dir: &Path, name: &str, n: usize, d: usize) -> PathBuf {
    let mut text = format!("matrix {n} {d}\n");
    let scale = 1.0 / (d as f64).sqrt();
    for _ in 0..n {
        for i in 0..d {
            let row: Vec<String> = (0..d).map(|j| if i == j { format!("{scale} 0") } else { "0 0".into() }).collect();
            text.push_str(&row.join(" "));
            text.push('\n');
        }
    }
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn conjugation_test_accepts_class_function_with_documented_queries() {
    let dir = TempDir::new().unwrap();
    // S3 classes: identity {0}, transpositions {1, 2, 5}, 3-cycles {3, 4}
    let f = scalar_file(dir.path(), "f.fn", &[(1.0, 0.0), (-0.5, 0.0), (-0.5, 0.0), (0.25, 0.1), (0.25, 0.1), (-0.5, 0.0)]);
    let out = grouptest(&["test-conjinv", "--group", "builtin:symmetric:3", "--function", s(&f), "--epsilon", "0.2", "--seed", "7"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["verdict"], "accept");
    assert_eq!(report["queries"], 100);
    assert_eq!(report["tester"], "conjugate_invariance");
    for key in ["tool_version", "epsilon", "seed", "rounds"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn conjugation_test_rejects_split_class_with_witness() {
    let dir = TempDir::new().unwrap();
    let f = scalar_file(dir.path(), "f.fn", &[(1.0, 0.0), (1.0, 0.0), (1.0, 0.0), (1.0, 0.0), (1.0, 0.0), (-1.0, 0.0)]);
    let out = grouptest(&["test-conjinv", "--group", "builtin:symmetric:3", "--function", s(&f), "--epsilon", "0.1", "--seed", "3"]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    assert_eq!(report["verdict"], "reject");
    assert_eq!(report["witness"]["kind"], "not_conjugation_invariant");
}

#[test]
fn homomorphism_test_rejects_constant_i() {
    let dir = TempDir::new().unwrap();
    let f = scalar_file(dir.path(), "f.fn", &[(0.0, 1.0); 6]);
    let args = ["test-hom", "--group", "builtin:symmetric:3", "--function", s(&f), "--epsilon", "0.3", "--seed", "1", "--certify"];
    let out = grouptest(&args);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["certificate"]["property"], "homomorphism");
    assert!(report["certificate"]["distance"].as_f64().unwrap() > 0.3);
}

#[test]
fn irreps_of_boolean_square() {
    let out = grouptest(&["irreps", "--group", "builtin:boolean_cube:2"]);
    assert_eq!(code(&out), 0);
    let table = json(&out);
    let irreps = table["irreps"].as_array().unwrap();
    assert_eq!(irreps.len(), 4);
    assert!(irreps.iter().all(|p| p["dim"] == 1));
}

#[test]
fn unitary_test_with_mismatched_dimensions_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let f = identity_matrices(dir.path(), "f.fn", 8, 2);
    let g = identity_matrices(dir.path(), "g.fn", 8, 3);
    let out = grouptest(&[
        "test-uniteq", "--group", "builtin:cyclic:8", "--function", s(&f), "--function2", s(&g), "--epsilon", "0.5", "--seed", "1",
    ]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
}

#[test]
fn unitary_test_accepts_equal_functions() {
    let dir = TempDir::new().unwrap();
    let f = identity_matrices(dir.path(), "f.fn", 4, 1);
    let out = grouptest(&[
        "test-uniteq", "--group", "builtin:cyclic:4", "--function", s(&f), "--function2", s(&f), "--epsilon", "0.5", "--seed", "1",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["tester"], "unitary_equivalence");
}

#[test]
fn malformed_file_reports_line_number() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.fn");
    std::fs::write(&path, "scalar 3\n1 0\n0.5 zero\n0 0\n").unwrap();
    let out = grouptest(&["test-conjinv", "--group", "builtin:cyclic:3", "--function", s(&path), "--epsilon", "0.2", "--seed", "1"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn order_mismatch_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let f = scalar_file(dir.path(), "f.fn", &[(1.0, 0.0); 5]);
    let out = grouptest(&["test-hom", "--group", "builtin:cyclic:6", "--function", s(&f), "--epsilon", "0.2", "--seed", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_flag_is_a_usage_error() {
    let out = grouptest(&["test-hom", "--group", "builtin:cyclic:6", "--epsilon", "0.2", "--seed", "1"]);
    assert_eq!(code(&out), 2);
    let out = grouptest(&["irreps", "--group", "builtin:nonsense:3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn group_from_table_file() {
    let dir = TempDir::new().unwrap();
    let grp = dir.path().join("c3.grp");
    std::fs::write(&grp, "3\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
    let out = grouptest(&["irreps", "--group", s(&grp)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["irreps"].as_array().unwrap().len(), 3);
}

#[test]
fn distance_and_fourier() {
    let dir = TempDir::new().unwrap();
    let f = scalar_file(dir.path(), "f.fn", &[(1.0, 0.0); 4]);
    let g = scalar_file(dir.path(), "g.fn", &[(1.0, 0.0), (-1.0, 0.0), (1.0, 0.0), (-1.0, 0.0)]);
    let out = grouptest(&["dist", "--group", "builtin:cyclic:4", "--function", s(&f), "--function2", s(&g)]);
    assert_eq!(code(&out), 0);
    // ½·sqrt(E|f − g|²) = ½·sqrt(2)
    assert!((json(&out)["distance"].as_f64().unwrap() - 0.5 * 2f64.sqrt()).abs() < 1e-12);
    let out = grouptest(&["fourier", "--group", "builtin:cyclic:4", "--function", s(&f)]);
    assert_eq!(code(&out), 0);
    let blocks = json(&out)["blocks"].as_array().unwrap().clone();
    assert_eq!(blocks.len(), 4);
}

#[test]
fn oracle_reports_certificates() {
    let dir = TempDir::new().unwrap();
    let f = scalar_file(dir.path(), "f.fn", &[(1.0, 0.0), (1.0, 0.0), (1.0, 0.0), (1.0, 0.0), (1.0, 0.0), (-1.0, 0.0)]);
    let out = grouptest(&["oracle", "--group", "builtin:symmetric:3", "--function", s(&f), "--property", "class-function"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let cert = json(&out);
    assert_eq!(cert["method"], "closed_form");
    assert!((cert["rejection_probability"].as_f64().unwrap() - 2.0 / 9.0).abs() < 1e-12);
    let out = grouptest(&["oracle", "--group", "builtin:symmetric:3", "--function", s(&f), "--property", "unitary-equivalence"]);
    assert_eq!(code(&out), 2);
}

fn experiment(dir: &Path, format: &str, out: &Path) -> Output {
    grouptest(&[
        "experiment", "--tester", "test-conjinv", "--group", "builtin:symmetric:3", "--family", "random-function",
        "--epsilon", "0.2:0.3:2", "--trials", "20", "--seed", "5", "--format", format, "--no-timing",
        "--instance-dir", s(&dir.join("instances")), "--out", s(out),
    ])
}

#[test]
fn experiment_outputs_agree_and_repeat() {
    let dir = TempDir::new().unwrap();
    let json_path = dir.path().join("a.json");
    let csv_path = dir.path().join("a.csv");
    assert_eq!(code(&experiment(dir.path(), "json", &json_path)), 0);
    assert_eq!(code(&experiment(dir.path(), "csv", &csv_path)), 0);
    let first = std::fs::read(&json_path).unwrap();
    assert_eq!(code(&experiment(dir.path(), "json", &json_path)), 0);
    assert_eq!(first, std::fs::read(&json_path).unwrap());

    let result: Value = serde_json::from_slice(&first).unwrap();
    let rows = result["rows"].as_array().unwrap();
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "epsilon,family_param,trials,accept_rate,mean_queries,max_queries,certified_distance,wall_ms"
    );
    let keys = ["epsilon", "family_param", "trials", "accept_rate", "mean_queries", "max_queries", "certified_distance", "wall_ms"];
    for (row, line) in rows.iter().zip(lines) {
        for (key, field) in keys.iter().zip(line.split(',')) {
            assert_eq!(row[key].as_f64().unwrap(), field.parse::<f64>().unwrap(), "{key}");
        }
    }

    // the logged instance reproduces the embedded certificate
    let logged = rows[0]["instance_files"][0].as_str().unwrap();
    let out = grouptest(&["oracle", "--group", "builtin:symmetric:3", "--function", logged, "--property", "class-function"]);
    let cert = json(&out);
    assert_eq!(cert["distance"], rows[0]["certificate"]["distance"]);
    assert_eq!(cert["optimizer"], rows[0]["certificate"]["optimizer"]);
}

#[test]
fn experiment_rejects_incompatible_family() {
    let dir = TempDir::new().unwrap();
    let out = grouptest(&[
        "experiment", "--tester", "test-hom", "--group", "builtin:cyclic:4", "--family", "planted-unitary", "--epsilon", "0.3",
        "--trials", "2", "--seed", "1", "--out", s(&dir.path().join("x.json")),
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot be used"));
}
