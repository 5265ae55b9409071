use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn punctum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_punctum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.cfg");
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn csv_starts_with_the_convention_line() {
    let o = punctum(&["determinant"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("# command: determinant;"));
    assert!(first.contains("mu_n < 0"));
    assert!(first.contains("kappa verdict: 1"));
    assert_eq!(text.lines().nth(1).unwrap(), "lambda,delta_re,delta_im,trunc_err,delta01_re,delta01_im");
}

#[test]
fn seeded_runs_are_identical() {
    let a = punctum(&["green-eval", "--seed", "7"]);
    let b = punctum(&["green-eval", "--seed", "7"]);
    let c = punctum(&["green-eval", "--seed", "8"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert_ne!(stdout(&a), stdout(&c));
}

#[test]
fn config_errors_name_the_line_and_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "# comment\ncutoff = 50\nmystery = 3\n");
    let o = punctum(&["determinant", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("run.cfg:3:"), "{err}");
    assert!(err.contains("mystery"), "{err}");
}

#[test]
fn zero_coupling_keeps_the_unperturbed_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "preset = zero\ncutoff = 200\nlambda_min = -100\nlambda_max = -1\n");
    let o = punctum(&["spectrum", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.split(',').nth(1) == Some("retained")));
}

#[test]
fn krein_passes_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = punctum(&["krein", "--out", out.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let csv = fs::read_to_string(out.join("krein.csv")).unwrap();
    assert!(csv.starts_with("# command: krein;"));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("krein.json")).unwrap()).unwrap();
    assert_eq!(json["header"]["M"], "200");
    assert!(!json["rows"].as_array().unwrap().is_empty());
}

#[test]
fn failed_checks_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "tol = 1e-30\n");
    let o = punctum(&["gamma-check", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
}

#[test]
fn generic_coupling_moves_the_eigenvalue() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "puncture = 0.3\n");
    let o = punctum(&["thm52", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().nth(2).unwrap().contains(",generic,"));
}

#[test]
fn json_requires_an_output_directory() {
    let o = punctum(&["basis", "--json"]);
    assert_eq!(o.status.code(), Some(2));
}
