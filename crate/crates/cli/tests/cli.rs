use std::path::Path;
use std::process::{Command, Output};

fn ppinterp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppinterp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn bounds_text() {
    let o = ppinterp(&["bounds", "--d", "1", "--m", "2", "--p", "2", "--c-phi", "1", "--c-psi", "1", "--c-rho", "1,1", "--dim-r", "2"]);
    assert!(o.status.success(), "{o:?}");
    let s = stdout(&o);
    assert!(s.starts_with("n_d="), "{s}");
    assert!(s.contains("b_d="), "{s}");
}

#[test]
fn bounds_rejects_mismatched_rho_counts() {
    let o = ppinterp(&["bounds", "--d", "1", "--m", "1", "--p", "2", "--c-rho", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn divisibility_implies_annihilation_over_dual_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let div = write(dir.path(), "div.json", r#"{"algebra": "lambda", "free": 1, "bound": 1, "matrix": [["1"], ["-x"]]}"#);
    let ann = write(dir.path(), "ann.json", r#"{"algebra": "lambda", "free": 1, "bound": 0, "matrix": [["x"]]}"#);
    // The simple module separates the converse.
    for (a, b, expect) in [(&div, &ann, "true"), (&ann, &div, "false")] {
        let o = ppinterp(&["--field", "fp:3", "implies", "--psi", a, "--phi", b]);
        assert!(o.status.success(), "{o:?}");
        assert_eq!(stdout(&o), expect);
    }
}

#[test]
fn eval_on_zero_module() {
    let dir = tempfile::tempdir().unwrap();
    let phi = write(dir.path(), "phi.json", r#"{"algebra": "lambda", "free": 1, "bound": 0, "matrix": [["x"]]}"#);
    let m = write(dir.path(), "zero.json", r#"{"algebra": "lambda", "dim": 0, "action": {"1": [], "x": []}}"#);
    let o = ppinterp(&["eval", "--formula", &phi, "--module", &m]);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(stdout(&o), "dimension 0");
}

#[test]
fn eval_on_regular_module_json() {
    let dir = tempfile::tempdir().unwrap();
    let phi = write(dir.path(), "phi.json", r#"{"algebra": "lambda", "free": 1, "bound": 0, "matrix": [["x"]]}"#);
    let m = write(
        dir.path(),
        "reg.json",
        r#"{"algebra": "lambda", "dim": 2, "action": {"1": [[1, 0], [0, 1]], "x": [[0, 1], [0, 0]]}}"#,
    );
    let o = ppinterp(&["--out", "json", "eval", "--formula", &phi, "--module", &m]);
    assert!(o.status.success(), "{o:?}");
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dim"], 1);
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\n  \"free\": 1,\n  oops\n}");
    let o = ppinterp(&["freereal", "--formula", &bad]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn inventory_is_deterministic() {
    let args = ["--cap", "2", "--seed", "7", "--out", "json", "inventory", "--algebra", "kronecker"];
    let a = ppinterp(&args);
    let b = ppinterp(&args);
    assert!(a.status.success(), "{a:?}");
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["modules"].as_array().unwrap().len(), 5);
}
