//! End-to-end runs of the `bachelier` binary.

use std::fs;
use std::process::{Command, Output};

fn bachelier(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bachelier")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

const PARAMS: [&str; 4] = ["--r", "0.05", "--sigma", "0.2"];

fn eval(expr: &str, t: &str, s: &str) -> Output {
    let mut args = vec!["eval", "--expr", expr, "--t", t, "--S", s];
    args.extend(PARAMS);
    bachelier(&args)
}

fn eval_number(expr: &str, t: &str, s: &str) -> f64 {
    let out = eval(expr, t, s);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    stdout(&out).trim().parse().unwrap()
}

#[test]
fn eval_linear_solution_prints_the_price() {
    let out = eval("C1[0]", "0.7", "1.25");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1.25\n");
}

#[test]
fn eval_growth_solution() {
    let v = eval_number("C2[0]", "2", "0.3");
    assert!((v - 0.1f64.exp()).abs() <= 1e-15 * v);
}

#[test]
fn eval_transformed_linear_solution_matches_its_closed_form() {
    let (r, v) = (0.05f64, 0.04f64);
    for (t, s, e) in [(0.5, 1.0, 0.5), (0.1, -1.5, -0.2), (0.9, 0.3, 2.0)] {
        let got = eval_number(&format!("C1[0] | G4({e})"), &t.to_string(), &s.to_string());
        let a = (2.0 * r * t).exp() + e;
        let want = (r * (3.0 * v * t * a - e * s * s) / (v * a)).exp() * s / a.powf(1.5);
        assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "{got} vs {want}");
    }
}

#[test]
fn negative_rates_and_prices_are_accepted() {
    let out = bachelier(&["eval", "--expr", "C1[0]", "--r", "-0.03", "--sigma", "0.2", "--t", "0", "--S", "-1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "-1\n");
}

#[test]
fn table_rows_follow_t_then_s() {
    let mut args = vec!["table", "--expr", "C1[0]", "--t-range", "0:1:2", "--S-range", "-1:1:2"];
    args.extend(PARAMS);
    let out = bachelier(&args);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "t,S,C\n0,-1,-1\n0,1,1\n1,-1,-1\n1,1,1\n");
}

#[test]
fn table_leaves_out_of_domain_cells_empty() {
    // exp(2rt) - 1.05 < 0 at t = 0 and > 0 at t = 1.
    let mut args = vec!["table", "--expr", "C1[0] | G4(-1.05)", "--t-range", "0:1:2", "--S-range", "-1:1:2"];
    args.extend(PARAMS);
    let out = bachelier(&args);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(&lines[1..3], ["0,-1,", "0,1,"]);
    assert!(lines[3].starts_with("1,-1,-") && lines[4].starts_with("1,1,"));
    assert_eq!(lines[5], "# skipped=2");
}

#[test]
fn table_output_is_reproducible_and_can_go_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("surface.csv");
    let mut args = vec![
        "table",
        "--expr",
        "2*C3[-2] - C4[-4] | G3(0.1) | G5(-0.2)",
        "--t-range",
        "0:1:11",
        "--S-range",
        "-2:2:41",
    ];
    args.extend(PARAMS);
    let first = bachelier(&args);
    let second = bachelier(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);

    args.extend(["--out", path.to_str().unwrap()]);
    let to_file = bachelier(&args);
    assert_eq!(code(&to_file), 0);
    assert!(to_file.stdout.is_empty());
    assert_eq!(fs::read(&path).unwrap(), first.stdout);
    assert_eq!(stdout(&first).lines().count(), 1 + 11 * 41);
}

#[test]
fn verify_scopes_pass() {
    for scope in ["theorem1", "theorem2", "groups", "examples", "kummer", "all"] {
        let out = bachelier(&["verify", "--scope", scope]);
        let text = stdout(&out);
        assert_eq!(code(&out), 0, "{scope}:\n{text}");
        assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 1);
        assert!(!text.contains("FAIL"));
    }
    let out = bachelier(&["verify", "--scope", "groups", "--r", "-0.03"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn transform_appends_the_group() {
    let out = bachelier(&["transform", "--expr", "C1[0]", "--group", "G6(0.2)"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1*C1[0] | G6(0.2)\n");
    let out = bachelier(&["transform", "--expr", "2*C4[-2] | G3(0.1)", "--group", "G5(-0.5)"]);
    assert_eq!(stdout(&out), "2*C4[-2] | G3(0.1) | G5(-0.5)\n");
}

#[test]
fn exit_codes_distinguish_failure_kinds() {
    let cases: [(&[&str], i32); 7] = [
        (&["transform", "--expr", "C1[0]", "--group", "G7(0.1)"], 2),
        (&["eval", "--expr", "C1[0", "--r", "0.05", "--sigma", "0.2", "--t", "0", "--S", "1"], 2),
        (&["eval", "--expr", "C1[0]", "--r", "0", "--sigma", "0.2", "--t", "0", "--S", "1"], 2),
        (&["eval", "--expr", "C1[0]", "--r", "0.05", "--t", "0", "--S", "1"], 2),
        (&["eval", "--expr", "C1[0] | G4(-5)", "--r", "0.05", "--sigma", "0.2", "--t", "0", "--S", "1"], 3),
        (&["eval", "--expr", "C1[-8]", "--r", "1", "--sigma", "0.2", "--t", "-100", "--S", "1"], 4),
        (&["verify", "--scope", "everything"], 2),
    ];
    for (args, want) in cases {
        let out = bachelier(args);
        assert_eq!(code(&out), want, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn parse_errors_point_at_the_offending_byte() {
    let out = eval("C1[0] C2[0]", "0", "1");
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte 6"));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# model\nr = 0.05\nsigma = 0.2\nexpr = C1[0]\nt = 0.7\nS = 1.25\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let out = bachelier(&["--config", cfg, "eval"]);
    assert_eq!(stdout(&out), "1.25\n");
    let out = bachelier(&["eval", "--config", cfg, "--S", "-3.5"]);
    assert_eq!(stdout(&out), "-3.5\n");

    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "rate = 0.05\n").unwrap();
    let out = bachelier(&["--config", bad.to_str().unwrap(), "eval"]);
    assert_eq!(code(&out), 2);
}
