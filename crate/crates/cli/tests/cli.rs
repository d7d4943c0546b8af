use std::process::{Command, Output};

use serde_json::Value;
use vortexpack::observables::PperpScan;
use vortexpack::MassExcess;

fn vortexpack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vortexpack"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(o: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let text = stdout(o);
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn error_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("stderr is one JSON object")
}

fn temp_config(name: &str, body: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("vortexpack-{}-{name}.json", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn mass_excess_of_a_thousand_quanta_at_one_nanometre() {
    let o = vortexpack(&["mass-excess", "--ell", "1000", "--sigma-perp-nm", "1"]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&o);
    assert_eq!(header, ["ell", "sigma_over_m", "delta_m_over_m", "leading"]);
    let v: f64 = rows[0][2].parse().unwrap();
    assert!((v / 7.46e-5 - 1.0).abs() < 0.01, "{v}");
    assert!(v < 1e-3);
}

#[test]
fn scan_with_zero_ell_max_is_one_gaussian_row() {
    let o = vortexpack(&["scan-pperp", "--ell-max", "0", "--sigma-ratio", "0.01"]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&o);
    assert_eq!(header, ["ell", "sqrt_ell", "pperp_over_sigma_exact", "pperp_over_sigma_quadrature"]);
    assert_eq!(rows.len(), 1);
    let exact: f64 = rows[0][2].parse().unwrap();
    let quad: f64 = rows[0][3].parse().unwrap();
    // Gamma(3/2) = sqrt(pi)/2, nudged up by O(sigma^2)
    assert!((exact - 0.886).abs() < 1e-3, "{exact}");
    assert!((exact - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-4);
    assert!((quad / exact - 1.0).abs() < 1e-7);
}

#[test]
fn csv_numbers_carry_seventeen_digits() {
    let o = vortexpack(&["scan-pperp", "--ell-max", "2", "--no-quadrature"]);
    let (_, rows) = csv_rows(&o);
    for row in rows {
        assert_eq!(row[3], "");
        let mantissa = row[2].split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{}", row[2]);
    }
}

#[test]
fn zero_rapidity_changes_nothing() {
    let o = vortexpack(&["boost-check", "--rapidity", "0", "--ell", "3", "--pbar", "0.7", "--sigma-ratio", "0.2"]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&o);
    assert_eq!(header, ["quantity", "original", "boosted", "delta"]);
    assert!(rows.len() >= 10);
    for row in rows {
        assert_eq!(row[3].parse::<f64>().unwrap(), 0.0, "{row:?}");
    }
}

#[test]
fn boost_deltas_are_small() {
    let o = vortexpack(&["boost-check", "--rapidity", "-2.5", "--ell", "2", "--pbar", "1", "--format", "json"]);
    let rows: Value = serde_json::from_slice(&o.stdout).unwrap();
    for row in rows.as_array().unwrap() {
        let scale = row["original"].as_f64().unwrap().abs().max(1.0);
        assert!(row["delta"].as_f64().unwrap().abs() <= 1e-7 * scale, "{row}");
    }
}

fn typed_round_trip<T: serde::Serialize + serde::de::DeserializeOwned>(args: &[&str]) {
    let o = vortexpack(args);
    assert!(o.status.success(), "{args:?}");
    let value: T = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(serde_json::to_string_pretty(&value).unwrap() + "\n", stdout(&o), "{args:?}");
}

#[test]
fn json_output_round_trips_exactly() {
    typed_round_trip::<MassExcess>(&["mass-excess", "--ell", "7", "--format", "json"]);
    typed_round_trip::<PperpScan>(&["scan-pperp", "--ell-max", "5", "--format", "json"]);
    for args in [
        &["observables", "--ell", "5", "--sigma-ratio", "0.1", "--pbar", "1"][..],
        &["moment", "--ell", "3", "--pbar", "1", "--helicity", "-1/2"][..],
    ] {
        let o = vortexpack(args);
        assert!(o.status.success(), "{args:?}");
        let first: Value = serde_json::from_slice(&o.stdout).unwrap();
        let second: Value = serde_json::from_str(&serde_json::to_string(&first).unwrap()).unwrap();
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["field", "--ell", "1", "--sigma-ratio", "0.2", "--pbar", "1", "--grid", "rho=0:6:7", "--grid", "t=0:4:3"];
    let a = vortexpack(&args);
    let b = vortexpack(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let (header, rows) = csv_rows(&a);
    assert_eq!(header, ["t", "rho", "phi", "z", "abs_psi", "phase", "kg_residual"]);
    assert_eq!(rows.len(), 21);
    // on the vortex line the field vanishes and the residual is undefined
    assert_eq!(rows[0][4].parse::<f64>().unwrap(), 0.0);
    assert!(rows[0][6].parse::<f64>().unwrap().is_nan());
    for row in &rows[1..7] {
        assert!(row[6].parse::<f64>().unwrap() < 1e-4, "{row:?}");
    }
}

#[test]
fn config_file_matches_flags() {
    let path = temp_config("mass", r#"{"command": "mass-excess", "ell": 1000, "sigma_perp_nm": 1.0}"#);
    let from_file = vortexpack(&["--config", path.to_str().unwrap()]);
    let from_flags = vortexpack(&["mass-excess", "--ell", "1000", "--sigma-perp-nm", "1"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, from_flags.stdout);
    let path = temp_config("field", r#"{"command": "field", "ell": 2, "grid": ["rho=1:3:3"], "model": "paraxial"}"#);
    let o = vortexpack(&["--config", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(csv_rows(&o).1.len(), 3);
}

#[test]
fn kinetic_energy_input() {
    // 300 keV electrons: p/m = sqrt((1 + T/m)^2 - 1)
    let o = vortexpack(&["observables", "--kinetic-kev", "300", "--ell", "0"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let gamma = 1.0 + 300.0 / 510.998_95;
    let expected = (gamma * gamma - 1.0f64).sqrt();
    assert!((v["params"]["pbar"].as_f64().unwrap() - expected).abs() < 1e-12);
}

#[test]
fn config_errors_exit_two_with_json() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["mass-excess", "--ell", "x"],
        vec!["mass-excess", "--sigma-ratio", "-1"],
        vec!["mass-excess", "--sigma-ratio", "0.1", "--sigma-perp-nm", "1"],
        vec!["field", "--grid", "w=0:1:2"],
        vec!["field", "--grid", "rho=0:1:0"],
        vec!["verify", "--check", "99"],
        vec!["--config", "/nonexistent/run.json"],
        vec![],
    ];
    for args in cases {
        let o = vortexpack(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(error_json(&o)["error"], "config", "{args:?}");
        assert!(o.stdout.is_empty());
    }
    let path = temp_config("both", r#"{"command": "verify"}"#);
    let o = vortexpack(&["--config", path.to_str().unwrap(), "verify"]);
    assert_eq!(o.status.code(), Some(2));
    let path = temp_config("bad", r#"{"command": "teleport"}"#);
    assert_eq!(vortexpack(&["--config", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn thread_cap_is_validated() {
    let run = |n: &str| {
        Command::new(env!("CARGO_BIN_EXE_vortexpack"))
            .args(["scan-pperp", "--ell-max", "3"])
            .env("VORTEXPACK_THREADS", n)
            .output()
            .unwrap()
    };
    assert!(run("1").status.success());
    assert_eq!(run("1").stdout, run("4").stdout);
    let o = run("zero");
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"], "config");
}

#[test]
fn verify_exit_status_follows_the_checks() {
    let o = vortexpack(&["verify", "--check", "3", "--check", "13"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2 of 2 passed"));
    let o = vortexpack(&["verify", "--check", "9", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_json(&o)["error"], "verification");
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["passed"], false);
    assert_eq!(report["checks"][0]["id"], 9);
}
