//! End-to-end behaviour of the `fraccalc` binary: outputs, exit codes and
//! determinism.

use std::f64::consts::FRAC_2_SQRT_PI;
use std::process::{Command, Output};

use fraccalc::tables::{TABLE1_GOLDEN_CSV, TABLE1_GOLDEN_TEXT};

fn run(args: &[&str]) -> Output {
    run_env(args, None)
}

fn run_env(args: &[&str], tol: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fraccalc"));
    cmd.args(args).env_remove("FRACCALC_TOL");
    if let Some(t) = tol {
        cmd.env("FRACCALC_TOL", t);
    }
    cmd.output().expect("spawn fraccalc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

/// Value printed after `key ` on its own line.
fn field(o: &Output, key: &str) -> f64 {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix(key)?.strip_prefix(' '))
        .unwrap_or_else(|| panic!("no `{key}` line in {:?}", stdout(o)))
        .parse()
        .expect("numeric field")
}

#[test]
fn eval_log_integral_both_methods() {
    let o = run(&[
        "eval", "--f", "log", "--order", "-1", "--x", "2", "--method", "both",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!((field(&o, "closed") + 0.613_705_638_9).abs() < 1e-10);
    assert!(field(&o, "discrepancy") < 1e-10);
}

#[test]
fn eval_identity_and_half_derivative() {
    let o = run(&[
        "eval", "--f", "power", "--r", "1", "--order", "0", "--x", "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&o, "closed"), 7.0);
    let o = run(&[
        "eval", "--f", "power", "--r", "1", "--order", "0.5", "--x", "1", "--method", "both",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!((field(&o, "closed") - FRAC_2_SQRT_PI).abs() < 1e-10);
    assert!((field(&o, "quad") - FRAC_2_SQRT_PI).abs() < 1e-6);
}

#[test]
fn eval_extended_power() {
    // D x^{-1} = −x^{-2}
    let o = run(&[
        "eval", "--f", "power", "--r", "-1", "--order", "1", "--x", "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&o, "closed"), -0.25);
}

#[test]
fn numbers_use_seventeen_significant_digits() {
    let o = run(&["harmonic", "--rho", "0.5"]);
    let text = stdout(&o);
    let value = text.trim().strip_prefix("h ").unwrap();
    let mantissa = value.split('e').next().unwrap();
    assert_eq!(mantissa.trim_start_matches('-').len(), 18, "{value}");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["eval", "--f", "power", "--order", "1", "--x", "1"][..],
        &["eval", "--f", "log", "--r", "1", "--order", "1", "--x", "1"],
        &["eval", "--f", "log", "--order", "1", "--x", "0"],
        &["eval", "--f", "log", "--order", "1", "--x", "1", "--a", "2"],
        &["zeta", "--m", "0", "--n", "3"],
        &["table1", "--m-range", "0..11"],
        &["table1", "--m-range", "2..1"],
        &["table1", "--format", "xml"],
        &["gentable", "--rho-list", "1", "--r-list", "0", "--a", "2"],
        &["curve", "--rho-min", "1", "--rho-max", "0", "--step", "0.1"],
        &["curve", "--rho-min", "0", "--rho-max", "1", "--step", "0"],
        &["verify", "--suite", "nope"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn bad_tolerance_env_is_a_usage_error() {
    let o = run_env(&["verify", "--suite", "zeta"], Some("not-a-number"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn computational_errors_exit_1_and_name_the_pole() {
    let o = run(&["harmonic", "--rho", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pole at -1"));
    let o = run(&[
        "eval", "--f", "power", "--r", "-1.5", "--order", "0.5", "--x", "1", "--a", "0.2",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn impossible_tolerance_fails_verification() {
    let o = run_env(&["verify", "--suite", "closed-vs-quad"], Some("1e-30"));
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL closed-vs-quad/oracle-agreement"));
}

#[test]
fn table1_default_matches_golden_files() {
    let o = run(&["table1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), TABLE1_GOLDEN_TEXT);
    let o = run(&["table1", "--format", "csv"]);
    assert_eq!(stdout(&o), TABLE1_GOLDEN_CSV);
}

#[test]
fn gentable_csv() {
    let o = run(&[
        "gentable",
        "--rho-list",
        "1,2",
        "--r-list",
        "0,1",
        "--a",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "# a = 0\nr\\rho,1,2\n0,x,1/2! x^2\n1,1/2! x^2,1/3! x^3\n"
    );
}

#[test]
fn curve_examples() {
    let o = run(&["curve", "--rho-min", "0", "--rho-max", "3", "--step", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("rho,h_rho,h_n_exact"));
    let exact: Vec<f64> = lines
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(exact, vec![0.0, 1.0, 1.5, 11.0 / 6.0]);

    let o = run(&[
        "curve",
        "--rho-min",
        "0.5",
        "--rho-max",
        "0.5",
        "--step",
        "1",
    ]);
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert!((row[1].parse::<f64>().unwrap() - 0.613_705_638_9).abs() < 1e-10);
    assert_eq!(row[2], "");

    let o = run(&[
        "curve",
        "--rho-min",
        "-0.5",
        "--rho-max",
        "-0.5",
        "--step",
        "1",
    ]);
    let text = stdout(&o);
    let h: f64 = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((h + 1.386_294_361_1).abs() < 1e-10);
}

#[test]
fn curve_skips_poles_with_comments() {
    let o = run(&[
        "curve",
        "--rho-min",
        "-2",
        "--rho-max",
        "0",
        "--step",
        "0.5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let comments = stdout(&o).lines().filter(|l| l.starts_with('#')).count();
    assert_eq!(comments, 2);
    assert!(!stdout(&o).contains("inf") && !stdout(&o).contains("NaN"));
}

#[test]
fn zeta_both_ways() {
    let o = run(&["zeta", "--m", "2", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((field(&o, "zeta") - 49.0 / 36.0).abs() < 1e-15);
    assert_eq!(field(&o, "zeta"), field(&o, "zeta_direct"));
}

#[test]
fn verify_suites_pass() {
    for suite in ["harmonic", "table1", "lemma-m", "zeta"] {
        let o = run(&["verify", "--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        let text = stdout(&o);
        let last = text.lines().last().unwrap();
        assert!(last.starts_with("verify: "), "{last}");
        assert!(text.lines().filter(|l| l.starts_with("PASS ")).count() >= 1);
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify", "--suite", "all"][..],
        &[
            "table1",
            "--m-range",
            "-10..10",
            "--n-range",
            "-10..10",
            "--format",
            "csv",
        ],
        &[
            "gentable",
            "--rho-list",
            "0.5,1.5,2.5",
            "--r-list",
            "-0.5,0,0.5,2",
            "--a",
            "1",
        ],
        &[
            "curve",
            "--rho-min",
            "-3",
            "--rho-max",
            "5",
            "--step",
            "0.125",
        ],
    ] {
        let first = run(args);
        let second = run(args);
        assert_eq!(first.status.code(), second.status.code(), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}
