use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_encouple")).args(args).env_remove("NCOUPLED_TOL").output().expect("run binary")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("one JSON object")
}

#[test]
fn basis_gram_is_identity() {
    let v = json(&["basis", "--n", "3"]);
    let gram = v["results"]["gram"].as_array().unwrap();
    assert_eq!(gram.len(), 8);
    for (i, row) in gram.iter().enumerate() {
        for (j, z) in row.as_array().unwrap().iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            assert_eq!(z[0].as_f64().unwrap(), want);
            assert_eq!(z[1].as_f64().unwrap(), 0.0);
        }
    }
    assert_eq!(v["checks"]["orthonormal"], true);
}

#[test]
fn chi_sweep_recovers_everything() {
    let v = json(&["densecode", "--protocol", "chi", "--n", "6", "--sweep"]);
    assert_eq!(v["results"]["successes"], 64);
    assert_eq!(v["results"]["total"], 64);
}

#[test]
fn three_phase_shared_syndrome_is_flagged() {
    let out = run(&["stabcode", "--code", "three-phase", "--n", "5", "--errors", "z", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][0], "Z1");
    assert_eq!(rows[0][1], rows[1][1]);
    assert_eq!(&rows[0][3..], ["true"]);
    assert_eq!(&rows[1][3..], ["true"]);
    assert!(rows[2..].iter().all(|r| r[3] == "false"));
}

#[test]
fn five_qubit_report() {
    let v = json(&["stabcode", "--code", "five-qubit"]);
    assert_eq!(v["checks"]["five_qubit_check"], true);
    assert_eq!(v["results"]["logical"]["x"]["operator"], "+XXXXX");
}

#[test]
fn state_amplitudes_use_bit_strings() {
    let v = json(&["state", "--n", "2", "--parity", "odd"]);
    let amps = v["results"]["amplitudes"].as_array().unwrap();
    assert_eq!(amps.len(), 2);
    assert_eq!(amps[0][0], "01");
    assert_eq!(amps[0][1].as_f64().unwrap(), 0.707106781187);
}

#[test]
fn verify_all_is_deterministic() {
    let a = run(&["verify-all"]);
    let b = run(&["verify-all"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8(a.stdout).unwrap().lines().count(), 13);
}

#[test]
fn tolerance_comes_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_encouple"))
        .args(["qinfo", "--n", "4"])
        .env("NCOUPLED_TOL", "1e-6")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tolerances"]["cmp"].as_f64().unwrap(), 1e-6);
    assert!((v["results"]["q_information"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["basis", "--n", "1"]).status.code(), Some(2));
    // a zero tolerance is stricter than any floating-point round trip
    assert_eq!(run(&["ising", "--n", "3", "--roundtrip", "-5", "--tol", "0"]).status.code(), Some(1));
}

#[test]
fn dictionary_free_interception() {
    let v = json(&["densecode", "--protocol", "dictionary-free", "--n", "4", "--eve"]);
    assert_eq!(v["checks"]["eve_spectrum_half_half"], true);
    assert_eq!(v["checks"]["eve_equal_mixture"], true);
    let p = v["results"]["eve_guess_probability"]["coupled"].as_f64().unwrap();
    assert!(p < 1.0);
}

#[test]
fn accounting() {
    let v = json(&["densecode", "--protocol", "traditional", "--accounting", "6"]);
    assert_eq!(v["results"]["accounting"]["qubit_transfers"], 9);
}
