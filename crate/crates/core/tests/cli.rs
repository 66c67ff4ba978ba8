use std::process::{Command, Output};

use powertower::tower::finite_tower;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powertower"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn number(args: &[&str]) -> f64 {
    stdout(args).trim().parse().unwrap()
}

#[test]
fn eval_examples() {
    assert_eq!(stdout(&["eval", "--x", "1.4142135623730951", "--height", "1000"]).trim(), "2");
    assert_eq!(stdout(&["eval", "--x", "1", "--height", "7"]).trim(), "1");
    let two = number(&["eval", "--x", "0.001", "--height", "2"]);
    let three = number(&["eval", "--x", "0.001", "--height", "3"]);
    assert!((two - 0.99311).abs() < 1e-5);
    assert!((three - 0.00104).abs() < 1e-5);
}

#[test]
fn classify_examples() {
    assert_eq!(stdout(&["classify", "--x", "1.5"]).trim(), "DivergesToInfinity");
    assert_eq!(stdout(&["classify", "--x", "1"]).trim(), "Unity 1");
    let line = stdout(&["classify", "--x", "0.0625"]);
    let mut parts = line.split_whitespace();
    assert_eq!(parts.next(), Some("TwoCycleRegime"));
    let values: Vec<f64> = parts.map(|v| v.parse().unwrap()).collect();
    assert!((values[0] - 0.25).abs() < 1e-12 && (values[1] - 0.5).abs() < 1e-12);
}

#[test]
fn fixedpoint_examples() {
    assert!((number(&["fixedpoint", "--x", "1.4142135623730951"]) - 2.0).abs() < 1e-12);
    assert!((number(&["fixedpoint", "--x", "1.4142135623730951", "--repulsive"]) - 4.0).abs() < 1e-12);
    assert_eq!(number(&["fixedpoint", "--x", "1"]), 1.0);
}

#[test]
fn cycle_and_lambertw() {
    assert_eq!(stdout(&["cycle", "--p", "2"]), "y_low,y_high,p,x\n0.25,0.5,2,0.0625\n");
    assert!((number(&["lambertw", "--z", "2"]) - 0.852606).abs() < 1e-6);
    let w = number(&["lambertw", "--z", "-0.1", "--branch", "secondary"]);
    assert!((w * w.exp() + 0.1).abs() < 1e-15);
}

#[test]
fn revert_w_exp_w() {
    let out = stdout(&["revert", "--coefficients", "1,1,0.5,0.16666666666666666"]);
    let coeffs: Vec<f64> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    for (c, w) in coeffs.iter().zip([1.0, -1.0, 1.5, -8.0 / 3.0]) {
        assert!((c - w).abs() < 1e-12);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["eval", "--x", "2", "--height", "3"]).status.code(), Some(0));
    let domain = run(&["eval", "--x", "-1", "--height", "2"]);
    assert_eq!(domain.status.code(), Some(2));
    assert!(domain.stdout.is_empty());
    assert!(String::from_utf8_lossy(&domain.stderr).contains("error"));
    assert_eq!(run(&["lambertw", "--z", "-5"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--x", "1.2", "--height", "2", "--precision", "3"]).status.code(), Some(2));
    assert_eq!(run(&["iterate", "--x", "0.07", "--max-iter", "3"]).status.code(), Some(3));
}

#[test]
fn csv_round_trip_within_one_ulp() {
    let out = stdout(&["bifurcation", "--x-min", "0.001", "--x-max", "0.05", "--samples", "40", "--height", "200"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("x,f_n,f_n_plus_1"));
    for line in lines {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let direct = finite_tower(f[0], 200).unwrap();
        assert!((f[1] - direct).abs() <= direct * f64::EPSILON, "{line}");
        let next = finite_tower(f[0], 201).unwrap();
        assert!((f[2] - next).abs() <= next.abs() * f64::EPSILON, "{line}");
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("defaults.conf");
    std::fs::write(&cfg, "# coarse output\nprecision = 6\nmax-iter = 3\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    assert_eq!(stdout(&["eval", "--x", "1.2", "--height", "3", "--config", cfg]).trim(), "1.25472");
    let full = stdout(&["eval", "--x", "1.2", "--height", "3", "--config", cfg, "--precision", "17"]);
    assert_eq!(full.trim().parse::<f64>().unwrap(), finite_tower(1.2, 3).unwrap());
    assert_eq!(run(&["iterate", "--x", "0.5", "--config", cfg]).status.code(), Some(3));
    assert_eq!(run(&["iterate", "--x", "0.5", "--config", cfg, "--max-iter", "1000"]).status.code(), Some(0));
    std::fs::write(dir.path().join("bad.conf"), "colour = blue\n").unwrap();
    let bad = dir.path().join("bad.conf");
    assert_eq!(run(&["eval", "--x", "1.2", "--height", "3", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cobweb.svg");
    let out = run(&["cobweb", "--x", "1.3", "--format", "svg", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("viewBox=\"0 0 800 600\""));
}
