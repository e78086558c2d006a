//! End-to-end checks of the command-line surface: exit codes, output
//! formats, determinism, and the re-parse invariant on emitted JSON.

use std::io::Write;
use std::process::{Command, Output};

use potbal::charge::ChargeDistribution;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_potbal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_potbal"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn ell_emits_value_and_exits_zero() {
    let out = run(&[
        "ell",
        "--nu",
        "gen:integers:8",
        "--r",
        "1",
        "--big-r",
        "8",
        "--side",
        "rh",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    // Harmonic number H_8 - 1 for unit masses at 1..8.
    let expected = (2..=8).map(|k| 1.0 / k as f64).sum::<f64>();
    assert!((v["value"].as_f64().unwrap() - expected).abs() < 1e-12);
}

#[test]
fn missing_input_file_exits_two() {
    let out = run(&[
        "ell",
        "--nu",
        "/nonexistent/charge.json",
        "--r",
        "1",
        "--big-r",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn malformed_json_exits_two() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(b"{ not json").unwrap();
    let out = run(&[
        "ell",
        "--nu",
        file.path().to_str().unwrap(),
        "--r",
        "1",
        "--big-r",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn inverted_annulus_exits_two() {
    let out = run(&["ell", "--nu", "gen:integers:4", "--r", "2", "--big-r", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_outside_criterion_exits_two() {
    let out = run(&[
        "ell",
        "--nu",
        "gen:integers:4",
        "--r",
        "1",
        "--big-r",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn library_error_exits_three() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(br#"{"atoms":[{"re":0.0,"im":0.0,"mass":1.0}],"lines":[]}"#)
        .unwrap();
    let out = run(&["sweep", "--nu", file.path().to_str().unwrap(), "--genus", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn failed_assertion_exits_one_after_emitting_report() {
    // Integers with doubled masses grow twice as fast as the comparison
    // model, so the gap verdict is decisively unbounded.
    let doubled: Vec<String> = (1..=512)
        .flat_map(|k| {
            [
                format!(r#"{{"re":{k}.0,"im":0.0,"mass":2.0}}"#),
                format!(r#"{{"re":-{k}.0,"im":0.0,"mass":2.0}}"#),
            ]
        })
        .collect();
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{"atoms":[{}],"lines":[]}}"#, doubled.join(",")).unwrap();
    let out = run(&[
        "criterion",
        "dyadic",
        "--nu",
        file.path().to_str().unwrap(),
        "--M",
        "sinpi",
        "--n-max",
        "9",
        "--assert-bounded",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "Unbounded");
}

#[test]
fn passed_assertion_exits_zero() {
    let out = run(&[
        "criterion",
        "dyadic",
        "--nu",
        "gen:integers:512",
        "--M",
        "sinpi",
        "--n-max",
        "9",
        "--assert-bounded",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "Bounded");
}

#[test]
fn runs_are_byte_identical_across_thread_counts() {
    let args = [
        "criterion",
        "pair",
        "--nu",
        "gen:integers:256",
        "--mu",
        "gen:integers:128",
        "--n-max",
        "8",
    ];
    let first = run(&args);
    let second = run(&args);
    let threaded = run_with_env(&args, "POTBAL_THREADS", "3");
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, threaded.stdout);
}

#[test]
fn emitted_distribution_reparses_to_an_equal_value() {
    let out = run(&["construct", "complete-r", "--nu", "gen:ray:1:16", "--n-max", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let gamma: ChargeDistribution = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(gamma.atoms.len(), 16);
    for (k, atom) in gamma.atoms.iter().enumerate() {
        assert!((atom.position.re + (k as f64 + 1.0)).abs() < 1e-9);
        assert!((atom.mass - 1.0).abs() < 1e-9);
    }
    // Serialize, parse, and compare: emission must not lose precision.
    let text = serde_json::to_string(&gamma).unwrap();
    let back: ChargeDistribution = serde_json::from_str(&text).unwrap();
    assert_eq!(gamma.atoms, back.atoms);
    let v1 = stdout_json(&out);
    let v2: serde_json::Value = serde_json::from_str(&serde_json::to_string(&v1).unwrap()).unwrap();
    assert_eq!(v1, v2);
}

#[test]
fn criterion_csv_has_header_and_full_grid() {
    let out = run(&[
        "criterion",
        "dyadic",
        "--nu",
        "gen:integers:16",
        "--M",
        "sinpi",
        "--n-max",
        "4",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,N,ell_nu,comparison,gap");
    // Dyadic pairs 0 <= n < N <= 4.
    assert_eq!(lines.len(), 1 + 10);
    for row in &lines[1..] {
        assert_eq!(row.split(',').count(), 5);
    }
}

#[test]
fn out_flag_writes_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gauge.json");
    let out = run(&[
        "qe",
        "--intervals",
        "0,1",
        "--r",
        "7.5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["q"].as_f64().unwrap() > 0.0);
}

#[test]
fn unknown_flag_exits_two() {
    let out = run(&["ell", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}
