use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_infima");

fn infima(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

const SUITE: &str = r#"
seed = 11
statements = ["THM1", "THM4_3"]
output = "report.jsonl"

[suite]
count = 3
dims = [1, 2]
norms = [2]
regime = "EQUAL"
"#;

#[test]
fn equal_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "suite.toml", SUITE);
    let out = infima(&["verify", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report = std::fs::read_to_string(dir.path().join("report.jsonl")).unwrap();
    assert_eq!(report.lines().count(), 6);
    assert!(dir.path().join("report.summary.txt").exists());
}

#[test]
fn strict_regime_with_minimax_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let body = SUITE.replace("regime = \"EQUAL\"", "regime = \"STRICT_LESS\"");
    let cfg = write(dir.path(), "strict.toml", &body);
    let out = infima(&["verify", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("report.jsonl").exists());
}

#[test]
fn empty_statement_list_writes_an_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let body = SUITE.replace(r#"["THM1", "THM4_3"]"#, "[]");
    let cfg = write(dir.path(), "empty.toml", &body);
    let out = infima(&["verify", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(dir.path().join("report.jsonl")).unwrap(), "");
}

#[test]
fn parse_errors_carry_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "seed = 1\nstatements = []\nbogus = 3\n");
    let out = infima(&["verify", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("at 3:1"), "{err}");
    assert!(err.contains("bogus"), "{err}");
}

#[test]
fn plot_on_empty_report_writes_headers() {
    let dir = tempfile::tempdir().unwrap();
    let report = write(dir.path(), "r.jsonl", "");
    let out_dir = dir.path().join("plots");
    let out = infima(&["plot", &report, "--out-dir", &out_dir.display().to_string()]);
    assert_eq!(out.status.code(), Some(0));
    let shells = std::fs::read_to_string(out_dir.join("thm4_4.csv")).unwrap();
    assert_eq!(shells, "instance,R,shell_inf\n");
    assert_eq!(std::fs::read_to_string(out_dir.join("thm1.csv")).unwrap().lines().count(), 1);
}

#[test]
fn plot_rejects_malformed_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = write(dir.path(), "r.jsonl", "{not json\n");
    let out = infima(&["plot", &report, "--out-dir", &dir.path().display().to_string()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn generated_config_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = infima(&["generate", "--seed", "5", "--regime", "EQUAL", "--n", "2", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let cfg = write(dir.path(), "gen.toml", &String::from_utf8(out.stdout).unwrap());
    let run = infima(&["verify", &cfg]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stdout));
}

#[test]
fn generate_rejects_unknown_regime() {
    let out = infima(&["generate", "--seed", "5", "--regime", "SOMETIMES"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "suite.toml", SUITE);
    let a = dir.path().join("a.jsonl").display().to_string();
    let b = dir.path().join("b.jsonl").display().to_string();
    assert_eq!(infima(&["verify", &cfg, "--output", &a]).status.code(), Some(0));
    assert_eq!(infima(&["verify", &cfg, "--output", &b]).status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
