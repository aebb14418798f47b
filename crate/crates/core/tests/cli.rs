use std::io::Write;
use std::process::{Command, Output, Stdio};

use lattice_ops::harness::{parse_report, Status};

const GOLDEN: &str = r#"{
  "lattice": {"kind": "quadratic", "beta": "1/4", "c5": "0"},
  "instance": {"family": "branch1", "params": {"a": "1", "b": "1/2"}},
  "checks": ["structure", "pearson", "sl", "conditions"],
  "seed": 0
}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lattice-ops"))
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn golden_config_passes() {
    let out = run_stdin(&["verify", "--config", "-"], GOLDEN);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = parse_report(&stdout(&out)).unwrap();
    assert_eq!(report.len(), 4);
    assert!(report.iter().all(|r| r.status == Status::Pass));
    assert!(out.stderr.is_empty());
}

#[test]
fn overridden_coefficient_fails_conditions() {
    let cfg = GOLDEN.replace(
        r#""params": {"a": "1", "b": "1/2"}"#,
        r#""params": {"a": "1", "b": "1/2"}, "overrides": [{"coeff": "C", "n": 2, "value": "26"}]"#,
    );
    let out = run_stdin(&["check", "conditions", "--config", "-"], &cfg);
    assert_eq!(out.status.code(), Some(1));
    let report = parse_report(&stdout(&out)).unwrap();
    assert_eq!(report[0].status, Status::Fail);
    assert_eq!(report[0].first_failure.as_ref().unwrap().residual, "2");
}

#[test]
fn unknown_check_is_a_config_error() {
    let cfg = GOLDEN.replace(r#""conditions""#, r#""foo""#);
    let out = run_stdin(&["verify", "--config", "-"], &cfg);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("foo"));

    let out = run_stdin(&["check", "foo", "--config", "-"], GOLDEN);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn short_recurrence_is_a_window_error() {
    let cfg = r#"{
      "lattice": {"kind": "quadratic", "beta": "1/4"},
      "instance": {"family": "recurrence", "params": {"B": ["0", "0"], "C": ["1"]}},
      "checks": [{"name": "thm41", "options": {"n_max": 10}}]
    }"#;
    let out = run_stdin(&["verify", "--config", "-", "--format", "text"], cfg);
    assert_eq!(out.status.code(), Some(3), "{}", stdout(&out));
    assert!(stdout(&out).starts_with("ERROR thm41"));
}

#[test]
fn reports_are_deterministic_and_roundtrip() {
    let cfg = GOLDEN.replace(
        r#"["structure", "pearson", "sl", "conditions"]"#,
        r#"["structure", {"name": "functionals", "options": {"cases": 6}}]"#,
    );
    let a = run_stdin(&["verify", "--config", "-", "--seed", "11"], &cfg);
    let b = run_stdin(&["verify", "--config", "-", "--seed", "11"], &cfg);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report = parse_report(&stdout(&a)).unwrap();
    let again = lattice_ops::harness::emit(&report, lattice_ops::harness::Format::Json);
    assert_eq!(again, stdout(&a));
}

#[test]
fn empty_check_list_gives_empty_report() {
    let cfg = GOLDEN.replace(r#"["structure", "pearson", "sl", "conditions"]"#, "[]");
    let out = run_stdin(&["verify", "--config", "-"], &cfg);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "[]\n");
}

#[test]
fn text_format_has_one_line_per_check() {
    let out = run_stdin(&["verify", "--config", "-", "--format", "text"], GOLDEN);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().next().unwrap().starts_with("PASS structure"));
}

#[test]
fn family_and_op_subcommands() {
    let out = bin()
        .args(["family", "branch1", "-p", "a=1", "-p", "b=1/2", "--n-max", "2", "--format", "text"])
        .args(["--lattice", r#"{"kind": "quadratic", "beta": "1/4"}"#])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("B_0 = -5/4") && text.contains("C_2 = 25"), "{text}");

    let out = bin()
        .args(["op", "dx", "--poly", "0,0,0,1", "--lattice", r#"{"kind": "quadratic", "beta": "1/4"}"#])
        .args(["--format", "text"])
        .output()
        .unwrap();
    assert_eq!(stdout(&out), "3z^2 + (5/2)z + 3/16\n");

    let out = bin().args(["family", "branch1", "-p", "a=1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
