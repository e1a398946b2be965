use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pointprob"))
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str], file: &Path) -> Output {
    let mut cmd = bin();
    cmd.arg(args[0]).arg(file).args(&args[1..]);
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const BINOM100: &str = r#"{"label": "binom100", "variables": [{"family": "bernoulli", "p": 0.5, "count": 100}]}"#;
const TWO_POINT: &str = r#"{"variables": [{"family": "finite", "support": [[0, 0.5], [2, 0.5]]}]}"#;

#[test]
fn summarize_binomial() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "b.json", BINOM100);
    let out = run(&["summarize"], &f);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["mu"], 50.0);
    assert_eq!(v["sigma_sq"], 25.0);
    assert_eq!(v["ess_inf"], 0);
    assert_eq!(v["ess_sup"], 100);
}

#[test]
fn summarize_constant_model() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "c.json", r#"{"variables": [{"family": "finite", "support": [[4, 1.0]], "count": 3}]}"#);
    let out = run(&["summarize"], &f);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["tau"].is_null());
    assert!(v["note"].as_str().unwrap().contains("degenerate"));
}

#[test]
fn malformed_files_exit_2_and_name_the_field() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.json", r#"{"variables": [{"family": "bernoulli", "p": "half"}]}"#);
    let out = run(&["summarize"], &f);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("variables[0].p"));

    let f = write(&dir, "syntax.json", "{\"variables\": [\n  {\"family\": }\n]}");
    let out = run(&["summarize"], &f);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn invalid_values_exit_3() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.json", r#"{"variables": [{"family": "geometric", "p": 1.0}]}"#);
    assert_eq!(run(&["summarize"], &f).status.code(), Some(3));
}

#[test]
fn gaussian_estimate_at_peak() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "b.json", BINOM100);
    let out = run(&["estimate", "50"], &f);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["method"], "gaussian");
    let est = v["estimate"].as_f64().unwrap();
    assert!((est - 0.0797885).abs() < 1e-7);
    assert!((est - 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * 5.0)).abs() < 1e-16);
    assert!((v["error_term"].as_f64().unwrap() - 0.01).abs() < 1e-15);
}

#[test]
fn tilted_estimate_reports_theta() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "b.json", BINOM100);
    let out = run(&["estimate", "70", "--method", "tilted"], &f);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let theta = v["diagnostics"]["theta"].as_f64().unwrap();
    assert!((theta - (7.0f64 / 3.0).ln()).abs() < 1e-12);
    assert!((v["diagnostics"]["sigma_y"].as_f64().unwrap() - 21f64.sqrt()).abs() < 1e-9);
    assert_eq!(v["diagnostics"]["tilted_monotone"], true);
}

#[test]
fn tilted_out_of_range_exits_4() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "b.json", BINOM100);
    let out = run(&["estimate", "200", "--method", "tilted"], &f);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("boundary"));
    let out = run(&["estimate", "100", "--method", "tilted"], &f);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pointprob boundary"));
}

#[test]
fn oracle_methods_agree() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "b.json", BINOM100);
    let exact = json(&run(&["estimate", "50", "--method", "exact"], &f));
    let inv = json(&run(&["estimate", "50", "--method", "invert"], &f));
    let e = exact["estimate"].as_f64().unwrap();
    assert!((e - 0.079_589_237_387_178_77).abs() < 1e-15);
    assert!((inv["estimate"].as_f64().unwrap() - e).abs() < 1e-12);
    assert_eq!(exact["defect"], 0.0);
}

#[test]
fn monte_carlo_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "b.json", BINOM100);
    let args = ["estimate", "50", "--method", "mc", "--samples", "20000", "--seed", "11"];
    let a = run(&args, &f);
    let b = run(&args, &f);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let (p, se) = (v["estimate"].as_f64().unwrap(), v["stderr"].as_f64().unwrap());
    assert!((p - 0.0795892).abs() < 4.0 * se);
}

#[test]
fn monotone_exit_codes() {
    let dir = TempDir::new().unwrap();
    let std = write(
        &dir,
        "std.json",
        r#"{"variables": [
            {"family": "bernoulli", "p": 0.3, "count": 4},
            {"family": "poisson", "lambda": 2.5},
            {"family": "geometric", "p": 0.6, "count": 2}]}"#,
    );
    assert_eq!(run(&["monotone"], &std).status.code(), Some(0));
    assert_eq!(run(&["monotone", "--strong"], &std).status.code(), Some(0));

    let two = write(&dir, "two.json", TWO_POINT);
    let out = run(&["monotone"], &two);
    assert_eq!(out.status.code(), Some(5));
    let v = json(&out);
    assert_eq!(v["is_monotone"], false);
    assert!(v["worst_location"].as_f64().unwrap() > std::f64::consts::FRAC_PI_2);

    let out = run(&["monotone", "--grid", "15"], &std);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["monotone", "--grid", "16"], &std).status.code(), Some(0));
}

#[test]
fn boundary_atoms() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "b.json", BINOM100);
    let v = json(&run(&["boundary", "--side", "upper"], &f));
    assert_eq!(v["value"], 100);
    assert!((v["probability"].as_f64().unwrap() / 0.5f64.powi(100) - 1.0).abs() < 1e-13);

    let g = write(&dir, "g.json", r#"{"variables": [{"family": "geometric", "p": 0.5, "count": 3}]}"#);
    assert_eq!(run(&["boundary", "--side", "upper"], &g).status.code(), Some(4));
    let v = json(&run(&["boundary"], &g));
    assert_eq!(v["probability"], 0.125);
}

fn tsv(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect()
}

#[test]
fn calibrate_binomial_sweep() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "cfg.json",
        r#"{"generators": [{"kind": "binomial", "p": 0.5}], "sizes": [64, 128, 256],
            "t_min": -3, "t_max": 3, "method": "gaussian"}"#,
    );
    let out = run(&["calibrate"], &cfg);
    assert_eq!(out.status.code(), Some(0));
    let rows = tsv(&out);
    assert_eq!(rows[0][6], "tau_sq");
    let last = rows.last().unwrap();
    assert_eq!(last[0], "max_ratio");
    let max: f64 = last[7].parse().unwrap();
    let body: Vec<f64> = rows[1..rows.len() - 1].iter().map(|r| r[7].parse().unwrap()).collect();
    assert_eq!(max, body.iter().cloned().fold(0.0, f64::max));
    assert!(max.is_finite() && max > 0.0);
    // points with |t| <= 3 for sigma = 4, 5.66, 8
    assert_eq!(body.len(), 25 + 33 + 49);
}

#[test]
fn calibrate_tilted_relative_error_shrinks() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "cfg.json",
        r#"{"generators": [{"kind": "binomial", "p": 0.5}], "sizes": [64, 1024],
            "t_min": 0, "t_max": 6, "method": "tilted"}"#,
    );
    let out = run(&["calibrate"], &cfg);
    assert_eq!(out.status.code(), Some(0));
    let rows = tsv(&out);
    assert_eq!(rows[0][6], "tau_y_sq");
    let worst = |label: &str| {
        rows.iter()
            .filter(|r| r[0].starts_with(label))
            .map(|r| r[8].parse::<f64>().unwrap())
            .fold(0.0, f64::max)
    };
    let small = worst("binomial(n=64,");
    let large = worst("binomial(n=1024,");
    assert!(large < small / 2.0, "{small} vs {large}");
}

#[test]
fn calibrate_empty_sweep_exits_3() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"generators": [], "sizes": [64], "t_min": -3, "t_max": 3}"#);
    assert_eq!(run(&["calibrate"], &cfg).status.code(), Some(3));
}

#[test]
fn resource_limit_exits_6() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "huge.json",
        r#"{"variables": [{"family": "poisson", "lambda": 1000.0, "count": 200000}]}"#,
    );
    assert_eq!(run(&["estimate", "200000000", "--method", "exact"], &f).status.code(), Some(6));
}

#[test]
fn outputs_round_trip_and_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "mix.json",
        r#"{"variables": [
            {"family": "bernoulli", "p": 0.37, "count": 40},
            {"family": "poisson", "lambda": 1.3, "count": 7},
            {"family": "geometric", "p": 0.21, "count": 5}]}"#,
    );
    let a = run(&["estimate", "31", "--method", "tilted"], &f);
    let b = run(&["estimate", "31", "--method", "tilted"], &f);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let reprinted = serde_json::to_string_pretty(&v).unwrap() + "\n";
    assert_eq!(reprinted.as_bytes(), a.stdout.as_slice());

    let cfg = write(
        &dir,
        "cfg.json",
        r#"{"generators": [{"kind": "mixed", "seed": 4}, {"kind": "poisson_sum", "lambda": 0.7}],
            "sizes": [60, 90], "t_min": -2, "t_max": 2}"#,
    );
    let one = bin().env("POINTPROB_THREADS", "1").arg("calibrate").arg(&cfg).output().unwrap();
    let four = bin().env("POINTPROB_THREADS", "4").arg("calibrate").arg(&cfg).output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    for row in tsv(&one).iter().skip(1) {
        for cell in &row[2..] {
            if cell.is_empty() {
                continue;
            }
            let x: f64 = cell.parse().unwrap();
            assert_eq!(&format!("{x:.16e}"), cell);
        }
    }
}
