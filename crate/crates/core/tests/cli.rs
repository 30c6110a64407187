use std::path::PathBuf;
use std::process::Command;

use liebraid::cli::run_with_io;
use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["liebraid"];
    full.extend_from_slice(args);
    let code = run_with_io(full, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn json_of(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", r.stdout))
}

fn write(dir: &TempDir, name: &str, v: &Value) -> String {
    let p: PathBuf = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

fn kohno(n: usize, truncation: usize, terms: Value) -> Value {
    json!({"alphabet": {"kind": "kohno", "n": n}, "truncation": truncation, "terms": terms})
}

fn free(m: usize, truncation: usize, terms: Value) -> Value {
    json!({"alphabet": {"kind": "free", "size": m}, "truncation": truncation, "terms": terms})
}

#[test]
fn dims_table() {
    let r = run(&["dims", "--n", "3", "--max-k", "3", "--enumerate"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json_of(&r);
    assert_eq!(v["universal"], json!([1, 3, 7, 15]));
    assert_eq!(v["lie"], json!([3, 1, 2]));
    assert_eq!(v["good_word_counts"], json!([1, 3, 7, 15]));
    let csv = run(&["dims", "--n", "3", "--max-k", "2", "--format", "csv"]);
    assert_eq!(csv.stdout, "k,universal,lie\n0,1,\n1,3,3\n2,7,1\n");
}

#[test]
fn nf_three_term_form_and_idempotence() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "word.json",
        &kohno(3, 2, json!([{"word": [[2, 3], [1, 2]], "coeff": "1"}])),
    );
    let r = run(&["nf", "--input", &input]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json_of(&r);
    let terms: Vec<(Value, String)> = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["word"].clone(), t["coeff"].as_str().unwrap().to_string()))
        .collect();
    assert_eq!(terms.len(), 3);
    assert!(terms.contains(&(json!([[1, 2], [2, 3]]), "1".into())));
    assert!(terms.contains(&(json!([[1, 2], [1, 3]]), "1".into())));
    assert!(terms.contains(&(json!([[1, 3], [1, 2]]), "-1".into())));
    let again = write(&dir, "nf.json", &v);
    let r2 = run(&["nf", "--input", &again, "--strategy", "rightmost"]);
    assert_eq!(json_of(&r2), v);
}

#[test]
fn grouplike_reports_violation() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "s.json",
        &free(
            2,
            2,
            json!([{"word": [], "coeff": "1"}, {"word": [1], "coeff": "1"}, {"word": [2], "coeff": "1"}]),
        ),
    );
    let r = run(&["grouplike", "--input", &input]);
    assert_eq!(r.code, 1);
    let v = json_of(&r);
    assert_eq!(v["grouplike"], json!(false));
    let violations = v["violations"].as_array().unwrap();
    assert!(violations.iter().any(|x| x["v"] == json!([1]) && x["w"] == json!([2])));
}

#[test]
fn grouplike_passes_for_exponential() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "s.json",
        &free(
            1,
            3,
            json!([{"word": [], "coeff": "1"}, {"word": [1], "coeff": "1"}, {"word": [1, 1], "coeff": "1/2"}, {"word": [1, 1, 1], "coeff": "1/6"}]),
        ),
    );
    assert_eq!(run(&["grouplike", "--input", &input]).code, 0);
}

#[test]
fn malformed_input_names_field() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bad.json", &free(2, 2, json!([{"word": [1], "coeff": "x/y"}])));
    let r = run(&["nf", "--input", &input]);
    assert_eq!(r.code, 2);
    let e: Value = serde_json::from_str(r.stderr.trim()).unwrap();
    assert!(e["field"].as_str().unwrap().starts_with("input.terms[0]"), "{e}");
    let missing = run(&["nf", "--input", "/nonexistent/file.json"]);
    assert_eq!(missing.code, 2);
    assert_eq!(run(&["no-such-command"]).code, 2);
    let r = run(&["rep-check", "--irreps", "1/2,7/3"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("irreps[1]"));
}

#[test]
fn mul_bch_factorize_project() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &kohno(3, 2, json!([{"word": [[2, 3]], "coeff": "1"}])));
    let b = write(&dir, "b.json", &kohno(3, 2, json!([{"word": [[1, 2]], "coeff": "1"}])));
    let r = run(&["mul", "--left", &a, "--right", &b]);
    assert_eq!(r.code, 0);
    assert_eq!(json_of(&r)["terms"].as_array().unwrap().len(), 3);

    let x = write(&dir, "x.json", &free(2, 2, json!([{"word": [1], "coeff": "1"}])));
    let y = write(&dir, "y.json", &free(2, 2, json!([{"word": [2], "coeff": "1"}])));
    let r = run(&["bch", "--x", &x, "--y", &y]);
    let v = json_of(&r);
    assert_eq!(v["primitive"], json!(true));
    assert!(v["bch"]["terms"]
        .as_array()
        .unwrap()
        .contains(&json!({"word": [1, 2], "coeff": "1/2"})));

    let g = write(
        &dir,
        "g.json",
        &kohno(
            3,
            2,
            json!([{"word": [], "coeff": "1"}, {"word": [[2, 3]], "coeff": "1"}, {"word": [[2, 3], [2, 3]], "coeff": "1/2"}]),
        ),
    );
    let r = run(&["factorize", "--input", &g]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(json_of(&r)["factors"].as_array().unwrap().len(), 2);
    let r = run(&["project", "--input", &g, "--alpha", "1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(json_of(&r)["alphabet"], json!({"kind": "kohno", "n": 2}));
}

#[test]
fn ordexp_constant_path() {
    let dir = TempDir::new().unwrap();
    let path = json!({
        "alphabet": {"kind": "free", "size": 1},
        "segments": [{"duration": "1", "components": [{"degree": 1, "terms": [{"word": [1], "poly": ["1"]}]}]}]
    });
    let p = write(&dir, "path.json", &path);
    let r = run(&["ordexp", "--input", &p, "--truncation", "3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json_of(&r);
    assert!(v["terms"]
        .as_array()
        .unwrap()
        .contains(&json!({"word": [1, 1, 1], "coeff": "1/6"})));
}

#[test]
fn norm_and_growth() {
    let dir = TempDir::new().unwrap();
    let s = write(
        &dir,
        "s.json",
        &free(2, 2, json!([{"word": [1], "coeff": "1"}, {"word": [2], "coeff": "-1"}])),
    );
    let r = run(&["norm", "--input", &s, "--base", "2", "--radius", "1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json_of(&r);
    assert_eq!(v["ell1_by_degree"], json!(["0", "2", "0"]));
    assert_eq!(v["seminorm"]["value"], json!("4"));

    let mut terms = vec![];
    let mut f = 1i64;
    for k in 0..=8usize {
        if k > 0 {
            f *= k as i64;
        }
        terms.push(json!({"word": vec![1; k], "coeff": format!("1/{f}")}));
    }
    let e = write(&dir, "e.json", &free(1, 8, Value::Array(terms)));
    let v = json_of(&run(&["growth", "--input", &e]));
    assert!(v["summary"].as_str().unwrap().starts_with("U-shriek candidate"), "{v}");
}

#[test]
fn representation_and_poisson_checks() {
    let r = run(&["rep-check", "--irreps", "1/2,1/2,1", "--unitarity", "--seed", "7"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let v = json_of(&r);
    assert_eq!(v["relations"]["passed"], json!(true));
    assert_eq!(v["unitarity"]["unitary"], json!(true));
    let r = run(&["poisson-check", "--structure", "gl(3)"]);
    assert_eq!(r.code, 0);
    assert_eq!(run(&["poisson-check", "--structure", "so3^x"]).code, 2);
}

#[test]
fn kz_commands() {
    let r = run(&["monodromy", "--generator", "1,2", "--n", "2", "--leading-log"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = json_of(&r);
    assert_eq!(v["windings"]["1,2"], json!(1.0));
    assert!(v["leading_log"]["residual"].as_f64().unwrap() < 1e-10);
    let r = run(&["braid-relations", "--n", "3"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(json_of(&r)["max_deviation"].as_f64().unwrap() < 1e-6);
}

#[test]
fn flow_commands() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.json", &json!({"points": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]}));
    let r = run(&[
        "flow",
        "--config",
        &c,
        "--hamiltonian",
        "D12",
        "--duration",
        "1",
        "--format",
        "csv",
        "--record-every",
        "100",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert!(lines[0].starts_with("t,x1,y1,z1"));
    assert_eq!(lines.len(), 1 + 11);
    let r = run(&[
        "flow-compose",
        "--word",
        "D12:1,D34:1,D12:-1,D34:-1",
        "--n",
        "4",
        "--samples",
        "5",
    ]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let r = run(&[
        "flow-compose",
        "--word",
        "D12:1,D13:1,D12:-1,D13:-1",
        "--n",
        "4",
        "--samples",
        "5",
    ]);
    assert_eq!(r.code, 1);
    assert_eq!(run(&["flow-compose", "--word", "D12", "--n", "4"]).code, 2);
}

#[test]
fn deterministic_and_binary_exit_codes() {
    let a = run(&[
        "flow-compose",
        "--word",
        "D12:1,D13:1,D12:-1,D13:-1",
        "--n",
        "3",
        "--samples",
        "3",
        "--seed",
        "5",
    ]);
    let b = run(&[
        "flow-compose",
        "--word",
        "D12:1,D13:1,D12:-1,D13:-1",
        "--n",
        "3",
        "--samples",
        "3",
        "--seed",
        "5",
    ]);
    assert_eq!(a.stdout, b.stdout);

    let bin = env!("CARGO_BIN_EXE_liebraid");
    let ok = Command::new(bin)
        .args(["dims", "--n", "2", "--max-k", "2"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let dir = TempDir::new().unwrap();
    let s = write(
        &dir,
        "s.json",
        &free(
            2,
            2,
            json!([{"word": [], "coeff": "1"}, {"word": [1], "coeff": "1"}, {"word": [2], "coeff": "1"}]),
        ),
    );
    let out = dir.path().join("report.json");
    let fail = Command::new(bin)
        .args(["grouplike", "--input", &s, "--output", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(report["grouplike"], json!(false));
    let bad = Command::new(bin)
        .args(["nf", "--input", "/nope.json"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
