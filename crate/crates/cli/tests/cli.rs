//! Runs the `cimmino` binary end to end: exit codes, output formats,
//! round trips and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use cimmino_cli::input::Input;
use cimmino_cli::output::{BenchRecord, FuncEqRecord, ResidueRecord, SolveRecord, ThetaRecord, VerifyRow, ZetaRecord};
use serde::de::DeserializeOwned;
use serde::Serialize;
use tempfile::TempDir;

const I2: &str = r#"{"n":2,"rows":[[1,0],[0,1]]}"#;
const Q2: &str = r#"{"n":2,"rows":[[2,0.5],[0.5,1]]}"#;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_args(args: &[&str]) -> Run {
    let Output { status, stdout, stderr } =
        Command::new(env!("CARGO_BIN_EXE_cimmino")).args(args).output().expect("binary runs");
    Run {
        code: status.code().expect("exit code"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn write_input(dir: &TempDir, name: &str, json: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn run(command: &str, json: &str, extra: &[&str]) -> Run {
    let dir = TempDir::new().unwrap();
    let p = write_input(&dir, "input.json", json);
    let mut args = vec![command, "--input", p.to_str().unwrap()];
    args.extend_from_slice(extra);
    run_args(&args)
}

/// Every line parses as `T` and serializes back to the same bytes.
fn round_trip<T: Serialize + DeserializeOwned>(text: &str) -> Vec<T> {
    text.lines()
        .map(|line| {
            let rec: T = serde_json::from_str(line).unwrap_or_else(|e| panic!("{line}: {e}"));
            assert_eq!(serde_json::to_string(&rec).unwrap(), line);
            rec
        })
        .collect()
}

#[test]
fn zeta_values_and_exit_codes() {
    let r = run("zeta", &format!(r#"{{"Q":{I2},"s_list":[3,0]}}"#), &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let recs: Vec<ZetaRecord> = round_trip(&r.stdout);
    assert_eq!(recs.len(), 2);
    assert!((recs[0].value_re - 4.658913615603852).abs() < 1e-11);
    assert!((recs[1].value_re + 1.0).abs() < 1e-10);

    let r = run("zeta", &format!(r#"{{"Q":{I2},"s":1}}"#), &[]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("pole"));
    assert!(r.stdout.is_empty());

    assert_eq!(run("zeta", &format!(r#"{{"Q":{I2},"s":3,"bogus":1}}"#), &[]).code, 2);
    assert_eq!(run("zeta", r#"{"Q":{"n":2,"rows":[[1,2],[2,1]]},"s":3}"#, &[]).code, 2);
    assert_eq!(run("zeta", r#"{"Q":{"n":2,"rows":[[1,0],[0]]},"s":3}"#, &[]).code, 2);
    assert_eq!(run("zeta", &format!(r#"{{"Q":{I2}}}"#), &[]).code, 2);
    assert_eq!(run("zeta", "not json", &[]).code, 2);
    assert_eq!(run_args(&["zeta"]).code, 2);
    assert_eq!(run_args(&["zeta", "--input", "/nonexistent/file.json"]).code, 2);
    assert_eq!(run_args(&["frobnicate"]).code, 2);
}

#[test]
fn zeta_families() {
    let r = run("zeta", &format!(r#"{{"Q":{Q2},"B":{I2},"s":{{"re":3.5,"im":1}}}}"#), &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let recs: Vec<ZetaRecord> = round_trip(&r.stdout);
    assert!(recs[0].value_im != 0.0);

    let r = run("zeta", r#"{"A":{"n":2,"rows":[[2,1],[1,3]]},"b":{"v":[5,10]},"s":3}"#, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let recs: Vec<ZetaRecord> = round_trip(&r.stdout);
    assert_eq!(recs.iter().map(|r| r.component).collect::<Vec<_>>(), vec![Some(0), Some(1)]);

    let r = run("zeta", r#"{"A":{"n":2,"rows":[[1,1],[1,1]]},"b":{"v":[5,10]},"s":3}"#, &[]);
    assert_eq!(r.code, 5);

    // Lattice Z² with generator diag(1,2) is Q = diag(1,4).
    let a = run("zeta", r#"{"lattice":{"n":2,"rows":[[1,0],[0,2]]},"s":3}"#, &[]);
    let b = run("zeta", r#"{"Q":{"n":2,"rows":[[1,0],[0,4]]},"s":3}"#, &[]);
    assert_eq!(a.code, 0);
    let (a, b): (Vec<ZetaRecord>, Vec<ZetaRecord>) = (round_trip(&a.stdout), round_trip(&b.stdout));
    assert!((a[0].value_re - b[0].value_re).abs() < 1e-12 * b[0].value_re);
}

#[test]
fn scan_csv() {
    let r = run("scan", &format!(r#"{{"Q":{I2},"s_range":{{"start":2,"end":4,"steps":5}}}}"#), &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines[0], "re_s,im_s,re_zeta,im_zeta,abs_err,flag");
    assert_eq!(lines.len(), 6);
    let re_s: Vec<f64> = lines[1..].iter().map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(re_s.windows(2).all(|w| w[0] < w[1]));
    for l in &lines[1..] {
        let fields: Vec<&str> = l.split(',').collect();
        assert_eq!(fields.len(), 6);
        // 17 significant digits: one leading digit and 16 decimals.
        let mantissa = fields[2].split('e').next().unwrap();
        assert_eq!(mantissa.trim_start_matches('-').len(), 18);
    }

    let r = run("scan", &format!(r#"{{"Q":{I2},"s_range":{{"start":0,"end":2,"steps":5}}}}"#), &[]);
    assert_eq!(r.code, 0);
    let flagged: Vec<&str> = r.stdout.lines().filter(|l| l.ends_with(",pole")).collect();
    assert_eq!(flagged.len(), 1);
    assert!(flagged[0].starts_with("1.0000000000000000e0,"));
    assert!(flagged[0].contains(",,,,"));

    let q = r#"{"n":2,"rows":[[1,0],[0,4]]}"#;
    let scan = run("scan", &format!(r#"{{"Q":{q},"s_range":{{"start":3,"end":3,"steps":1}}}}"#), &[]);
    let zeta = run("zeta", &format!(r#"{{"Q":{q},"s":3}}"#), &["--format", "csv"]);
    assert_eq!(scan.code, 0);
    assert_eq!(scan.stdout, zeta.stdout);
    assert_eq!(scan.stdout.lines().count(), 2);

    for bad in [
        r#"{"start":3,"end":4,"steps":0}"#,
        r#"{"start":3,"end":4,"steps":1}"#,
        r#"{"start":3,"end":4}"#,
    ] {
        assert_eq!(run("scan", &format!(r#"{{"Q":{I2},"s_range":{bad}}}"#), &[]).code, 2, "{bad}");
    }
    assert_eq!(run("scan", &format!(r#"{{"Q":{I2},"s":3}}"#), &[]).code, 2);
}

#[test]
fn theta_residue_funceq() {
    let r = run("theta", &format!(r#"{{"Q":{I2},"t_list":[0.5,1,2]}}"#), &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let recs: Vec<ThetaRecord> = round_trip(&r.stdout);
    // θ(t) = (Σ e^{-πtk²})², so θ*(1) = θ(1)² - 1 with θ(1) = 1.0864348112133...
    assert!((recs[1].value - (1.0864348112133080_f64.powi(2) - 1.0)).abs() < 1e-13);
    assert_eq!(run("theta", &format!(r#"{{"Q":{I2},"t":-1}}"#), &[]).code, 2);

    let r = run("residue", &format!(r#"{{"Q":{I2}}}"#), &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rec: Vec<ResidueRecord> = round_trip(&r.stdout);
    assert!((rec[0].analytic[0].re - std::f64::consts::PI).abs() < 1e-15);
    assert!(rec[0].abs_diff < 1e-8);
    let r = run("residue", r#"{"A":{"n":2,"rows":[[2,0],[0,3]]},"b":{"v":[2,3]}}"#, &[]);
    let rec: Vec<ResidueRecord> = round_trip(&r.stdout);
    assert_eq!(rec[0].family, "vector");
    assert_eq!(rec[0].analytic.len(), 2);

    let r = run("funceq", &format!(r#"{{"Q":{Q2},"B":{I2},"s_list":[{{"re":0.3,"im":0.7}},1.7]}}"#), &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let recs: Vec<FuncEqRecord> = round_trip(&r.stdout);
    assert!(recs.iter().all(|r| r.residual < 1e-8 && r.family == "weighted"));
    let r = run(
        "funceq",
        r#"{"A":{"n":2,"rows":[[2,1],[1,3]]},"b":{"v":[5,10]},"c":{"v":[1,-1]},"s":{"re":0.3,"im":0.7},"tolerance":1e-8}"#,
        &[],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    // Γ(s) has a pole at 0.
    assert_eq!(run("funceq", &format!(r#"{{"Q":{I2},"s":0}}"#), &[]).code, 3);
}

#[test]
fn solve_exit_codes() {
    let r = run("solve", r#"{"A":{"n":2,"rows":[[2,0],[0,3]]},"b":{"v":[2,3]},"route":"residues"}"#, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rec: Vec<SolveRecord> = round_trip(&r.stdout);
    assert!(rec[0].x.iter().all(|x| (x - 1.0).abs() < 1e-12));
    assert!((rec[0].r - std::f64::consts::PI / 3.0).abs() < 1e-15);

    let r = run(
        "solve",
        r#"{"A":{"n":2,"rows":[[2,1],[1,3]]},"b":{"v":[5,10]},"route":"integrals","quadrature":{"method":"circle_trapezoid","nodes":1024}}"#,
        &[],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rec: Vec<SolveRecord> = round_trip(&r.stdout);
    assert!((rec[0].x[1] - 3.0).abs() < 1e-8);
    assert_eq!(rec[0].method.quadrature.unwrap().nodes, 1024);

    assert_eq!(run("solve", r#"{"A":{"n":2,"rows":[[1,1],[1,1]]},"b":{"v":[1,1]}}"#, &[]).code, 5);
    assert_eq!(run("solve", r#"{"A":{"n":2,"rows":[[1,0],[0,1]]},"b":{"v":[1]}}"#, &[]).code, 2);
    assert_eq!(run("solve", r#"{"A":{"n":2,"rows":[[1,0],[0,1]]},"b":{"v":[1,1]},"route":"integrals"}"#, &[]).code, 2);
    assert_eq!(run("solve", r#"{"A":{"n":2,"rows":[[1,0],[0,1]]},"b":{"v":[1,1]},"route":"magic"}"#, &[]).code, 2);
    // A deliberately coarse rule misses the default tolerance.
    let r = run(
        "solve",
        r#"{"A":{"n":2,"rows":[[2,1],[1,3]]},"b":{"v":[5,10]},"route":"integrals","quadrature":{"method":"circle_trapezoid","nodes":8}}"#,
        &[],
    );
    assert_eq!(r.code, 4);
    let rec: Vec<SolveRecord> = round_trip(&r.stdout);
    assert!(!rec[0].pass);
}

#[test]
fn monte_carlo_solve_is_deterministic() {
    let json = r#"{"A":{"n":4,"rows":[[3,0.5,0.2,0],[0.1,2.5,0.3,0.4],[0,0.2,2,0.1],[0.3,0,0.4,3.5]]},"b":{"v":[1,-2,0.5,3]},
        "route":"integrals","quadrature":{"method":"monte_carlo","nodes":200000,"seed":42},"tolerance":0.01}"#;
    let a = run("solve", json, &[]);
    let b = run("solve", json, &[]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let c = run("solve", json, &["--seed", "43"]);
    assert_ne!(a.stdout, c.stdout);
    let rec: Vec<SolveRecord> = round_trip(&c.stdout);
    assert_eq!(rec[0].method.quadrature.unwrap().seed, 43);
}

#[test]
fn verify_suite_and_cases() {
    let r = run_args(&["verify"]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.contains("0 failed"));

    let r = run("verify", r#"{"tolerance":1e-14}"#, &["--format", "json"]);
    assert_eq!(r.code, 4);
    let rows: Vec<VerifyRow> = round_trip(&r.stdout);
    assert!(rows.iter().any(|r| !r.pass && r.measured > 1e-14));
    assert!(rows.iter().any(|r| r.pass));

    assert_eq!(run("verify", r#"{"tolerance":1e-15}"#, &[]).code, 2);

    let r = run("verify", &format!(r#"{{"check":"funceq","Q":{Q2},"s":{{"re":0.3,"im":0.7}}}}"#), &["--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows: Vec<VerifyRow> = round_trip(&r.stdout);
    assert_eq!(rows.len(), 1);

    let cases = format!(
        r#"[{{"check":"residue","Q":{Q2}}},
            {{"check":"overlap","Q":{Q2},"B":{I2}}},
            {{"check":"theta_transform","Q":{Q2}}},
            {{"check":"solve","A":{Q2},"b":{{"v":[1,2]}},"route":"numeric_residues"}}]"#
    );
    let r = run("verify", &cases, &["--format", "csv"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.lines().count(), 5);
    assert_eq!(run("verify", &format!(r#"{{"Q":{Q2}}}"#), &[]).code, 2);
}

#[test]
fn bench_and_output_file() {
    let r = run_args(&["bench"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let recs: Vec<BenchRecord> = r.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(recs.len() >= 5 && recs.iter().all(|b| b.mean_us > 0.0));

    let dir = TempDir::new().unwrap();
    let input = write_input(&dir, "in.json", &format!(r#"{{"Q":{I2},"s":3}}"#));
    let out = dir.path().join("out.json");
    let r = run_args(&["zeta", "-i", input.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    let _: Vec<ZetaRecord> = round_trip(&std::fs::read_to_string(out).unwrap());
}

#[test]
fn input_schema_round_trip() {
    let text = format!(
        r#"{{"A":{Q2},"b":{{"v":[1,2]}},"s_range":{{"start":{{"re":1,"im":2}},"end":3,"steps":4}},"route":"integrals","quadrature":{{"method":"product_gauss","nodes":16,"seed":0}},"tolerance":1e-6}}"#
    );
    let input = Input::parse(&text).unwrap();
    let again = serde_json::to_string(&input).unwrap();
    assert_eq!(Input::parse(&again).unwrap(), input);
}
