use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn xxchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xxchain"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = xxchain(args);
    assert!(
        o.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

#[test]
fn ent_scan_rows() {
    let text = ok(&[
        "ent",
        "scan",
        "--family",
        "krawtchouk",
        "--p",
        "0.5",
        "--ratio-l",
        "0.5",
        "--ratio-k",
        "0.5",
        "--N",
        "16:64:16",
    ]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,ell,S,route,commutator_residual");
    assert_eq!(lines.len(), 5);
    let ns: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(ns, ["16", "32", "48", "64"]);
}

#[test]
fn synthesize_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let spectrum = dir.path().join("spectrum.json");
    let chain = dir.path().join("chain.json");
    fs::write(&spectrum, "[-3.0, -1.0, 1.0, 3.0]").unwrap();
    ok(&[
        "pst",
        "synthesize",
        "--spectrum",
        spectrum.to_str().unwrap(),
        "-o",
        chain.to_str().unwrap(),
    ]);
    let spec: Value = serde_json::from_str(&fs::read_to_string(&chain).unwrap()).unwrap();
    assert_eq!(spec["B"].as_array().unwrap().len(), 4);
    assert_eq!(spec["J"].as_array().unwrap().len(), 3);

    let check: Value = serde_json::from_str(&ok(&[
        "pst",
        "check",
        "--chain",
        chain.to_str().unwrap(),
        "--tau",
        &std::f64::consts::FRAC_PI_2.to_string(),
    ]))
    .unwrap();
    assert_eq!(check["verdict"], Value::Bool(true));
}

#[test]
fn pst_check_builtin_family() {
    let v: Value = serde_json::from_str(&ok(&[
        "pst",
        "check",
        "--family",
        "krawtchouk",
        "--N",
        "20",
        "--p",
        "0.5",
    ]))
    .unwrap();
    assert_eq!(v["verdict"], Value::Bool(true));
    assert!((v["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn missing_chain_is_usage_error() {
    let o = xxchain(&["transport", "current", "--T0", "2", "--TN", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn zero_mode_is_compute_error() {
    let o = xxchain(&[
        "transport",
        "current",
        "--family",
        "krawtchouk",
        "--N",
        "10",
        "--T0",
        "2",
        "--TN",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("positive"));

    let v: Value = serde_json::from_str(&ok(&[
        "transport",
        "current",
        "--family",
        "krawtchouk",
        "--N",
        "10",
        "--T0",
        "2",
        "--TN",
        "1",
        "--shift",
        "auto",
    ]))
    .unwrap();
    let (g, m) = (v["hL"].as_f64().unwrap(), v["hL_mirror"].as_f64().unwrap());
    assert!(g > 0.0 && ((g - m) / g).abs() < 1e-10);
}

#[test]
fn bad_range_is_usage_error() {
    for r in ["64:16:16", "16:64:0", "x"] {
        let o = xxchain(&[
            "ent",
            "scan",
            "--ratio-l",
            "0.5",
            "--ratio-k",
            "0.5",
            "--N",
            r,
        ]);
        assert_eq!(o.status.code(), Some(2), "{r}");
    }
}

#[test]
fn csv_and_json_agree() {
    let base = [
        "neg",
        "sweep",
        "--family",
        "krawtchouk",
        "--N",
        "200",
        "--p",
        "0.5",
        "--d",
        "3:9:2",
    ];
    let csv = ok(&[&base[..], &["--format", "csv"]].concat());
    let json: Vec<Value> =
        serde_json::from_str(&ok(&[&base[..], &["--format", "json"]].concat())).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "d,Ef,Ef_skeletal,C_mn,C_asymptotic");
    assert_eq!(lines.len() - 1, json.len());
    for (line, rec) in lines[1..].iter().zip(&json) {
        let ef: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(ef, rec["Ef"].as_f64().unwrap());
        assert!(rec["C_asymptotic"].is_number());
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "transport",
        "scan",
        "--T",
        "10",
        "--dT",
        "0.05",
        "--N",
        "10:40:10",
    ];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn inline_chain_json() {
    let v: Value = serde_json::from_str(&ok(&[
        "neg",
        "pair",
        "--chain-json",
        r#"{"kind":"custom","J":[1.0],"B":[0.0,0.0]}"#,
        "--K",
        "0",
        "--m",
        "0",
        "--n",
        "1",
    ]))
    .unwrap();
    assert!((v["Ef"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-10);
}

#[test]
fn affine_fit_reports_correlation() {
    let v: Value = serde_json::from_str(&ok(&[
        "ent",
        "fit-affine",
        "--family",
        "krawtchouk",
        "--N",
        "40",
        "--p",
        "0.5",
        "--ell",
        "19",
    ]))
    .unwrap();
    assert!(v["pearson"].as_f64().unwrap() > 0.999);
}
