use std::path::Path;
use std::process::{Command, Output};

use clap::Parser;
use serde_json::Value;

use periodic_core::cli::{exit_code, run, Cli};
use periodic_core::Error;

fn periodic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_periodic"))
        .args(args)
        .output()
        .unwrap()
}

fn in_process(args: &[&str]) -> i32 {
    let cli = Cli::try_parse_from(std::iter::once("periodic").chain(args.iter().copied())).unwrap();
    match run(cli) {
        Ok(()) => 0,
        Err(e) => exit_code(&e),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn read_json(path: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn zero_one_by_one_et() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "z.json", r#"{"field": "q", "rows": [["0"]]}"#);
    let out = periodic(&["decompose", "--mode", "et", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["parts"]["E"], serde_json::json!([["1"]]));
    assert_eq!(v["parts"]["T"], serde_json::json!([["-1"]]));
    assert_eq!(v["torsion_order"], 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = write(
        dir.path(),
        "z3.json",
        r#"{"rows": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]}"#,
    );
    let unipotent = write(dir.path(), "u.json", r#"{"rows": [[1, 1], [0, 1]]}"#);
    let broken = write(dir.path(), "b.json", r#"{"rows": [[1, 1], [0, 1]"#);
    let empty = write(dir.path(), "e.json", r#"{"rows": []}"#);
    let code = |args: &[&str]| periodic(args).status.code();
    assert_eq!(
        code(&["decompose", "--mode", "tn", "--input", &zeros]),
        Some(3)
    );
    assert_eq!(
        code(&["decompose", "--mode", "tn", "--input", &unipotent]),
        Some(2)
    );
    assert_eq!(
        code(&["decompose", "--mode", "et", "--input", &unipotent]),
        Some(2)
    );
    assert_eq!(
        code(&["decompose", "--mode", "et", "--input", &broken]),
        Some(1)
    );
    assert_eq!(code(&["analyze", "--input", &empty]), Some(1));
    assert_eq!(code(&["generate", "--size", "13"]), Some(1));
    assert_eq!(
        code(&["decompose", "--mode", "xy", "--input", &zeros]),
        Some(1)
    );
    // the same unipotent matrix is periodic over 𝔽₂
    assert_eq!(
        code(&[
            "decompose",
            "--mode",
            "et",
            "--input",
            &unipotent,
            "--field",
            "fp:2"
        ]),
        Some(0)
    );
}

#[test]
fn error_mapping() {
    assert_eq!(exit_code(&Error::InvalidInput(String::new())), 1);
    assert_eq!(exit_code(&Error::NotPeriodic), 2);
    assert_eq!(exit_code(&Error::RankTooLow { rank: 0, n: 1 }), 3);
    assert_eq!(exit_code(&Error::SolverExhausted(String::new())), 4);
    assert_eq!(exit_code(&Error::NotSplitOverField), 5);
}

#[test]
fn generate_is_deterministic() {
    let run = || periodic(&["generate", "--field", "fp:3", "--size", "6", "--seed", "42"]).stdout;
    let first = run();
    assert!(!first.is_empty());
    assert_eq!(first, run());
    let other = periodic(&["generate", "--field", "fp:3", "--size", "6", "--seed", "43"]).stdout;
    assert_ne!(first, other);
}

#[test]
fn generate_writes_truth_next_to_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let out = out.to_str().unwrap();
    assert_eq!(
        in_process(&[
            "generate", "--field", "qsqrt:2", "--size", "5", "--seed", "7", "--output", out
        ]),
        0
    );
    let truth = read_json(dir.path().join("m.truth.json").to_str().unwrap());
    let analysis = dir.path().join("a.json");
    let analysis = analysis.to_str().unwrap();
    assert_eq!(
        in_process(&["analyze", "--input", out, "--output", analysis]),
        0
    );
    let a = read_json(analysis);
    let mut got: Vec<String> = a["canonical"]["divisors"]
        .as_array()
        .unwrap()
        .iter()
        .map(Value::to_string)
        .collect();
    let mut want: Vec<String> = truth["divisors"]
        .as_array()
        .unwrap()
        .iter()
        .map(Value::to_string)
        .collect();
    got.sort();
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn torsion_only_is_periodic_from_one() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("t.json");
    let m = m.to_str().unwrap();
    let a = dir.path().join("a.json");
    let a = a.to_str().unwrap();
    assert_eq!(
        in_process(&[
            "generate",
            "--size",
            "6",
            "--seed",
            "5",
            "--torsion-only",
            "--output",
            m
        ]),
        0
    );
    assert_eq!(in_process(&["analyze", "--input", m, "--output", a]), 0);
    assert_eq!(read_json(a)["periodic"]["n0"], 1);
}

/// Every certificate the decompose command writes is accepted by verify.
#[test]
fn verify_closes_the_loop() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: String| dir.path().join(name).to_string_lossy().into_owned();
    for field in ["fp:2", "fp:3", "fp:5", "q", "qsqrt:2"] {
        for seed in 0..200u64 {
            let size = (1 + seed % 8).to_string();
            let seed_s = seed.to_string();
            let m = p(format!("{field}-{seed}.json"));
            let c = p(format!("{field}-{seed}.cert.json"));
            let args = [
                "generate", "--field", field, "--size", &size, "--seed", &seed_s, "--output", &m,
            ];
            assert_eq!(in_process(&args), 0);
            assert_eq!(
                in_process(&["decompose", "--mode", "et", "--input", &m, "--output", &c]),
                0
            );
            assert_eq!(
                in_process(&["verify", "--input", &c]),
                0,
                "{field} seed {seed}"
            );
            assert_eq!(in_process(&["verify", "--input", &c, "--matrix", &m]), 0);

            let small = seed % 8 < 4;
            if field.starts_with("fp") || small {
                let tn = p(format!("{field}-{seed}.tn.json"));
                match in_process(&["decompose", "--mode", "tn", "--input", &m, "--output", &tn]) {
                    0 => assert_eq!(
                        in_process(&["verify", "--input", &tn]),
                        0,
                        "{field} seed {seed}"
                    ),
                    code => assert!(matches!(code, 3 | 4), "{field} seed {seed}: exit {code}"),
                }
            }
        }
    }
}

#[test]
fn verify_rejects_a_tampered_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "z.json", r#"{"rows": [["0"]]}"#);
    let cert = dir.path().join("c.json");
    let cert = cert.to_str().unwrap();
    assert_eq!(
        in_process(&[
            "decompose",
            "--mode",
            "et",
            "--input",
            &input,
            "--output",
            cert
        ]),
        0
    );
    let mut v = read_json(cert);
    v["parts"]["E"] = serde_json::json!([["2"]]);
    v["parts"]["T"] = serde_json::json!([["-2"]]);
    std::fs::write(cert, v.to_string()).unwrap();
    let out = periodic(&["verify", "--input", cert]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], false);
}

#[test]
fn demo_output_is_stable() {
    let first = periodic(&["demo", "remark29"]);
    let second = periodic(&["demo", "remark29"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let text = String::from_utf8(first.stdout).unwrap();
    assert!(text.contains("x^4 - 2x^3 + x^2 - 2x + 1"));
    for phi in ["Phi_5 ", "Phi_8 ", "Phi_10", "Phi_12"] {
        assert!(
            text.lines()
                .any(|l| l.contains(phi) && l.ends_with("differs")),
            "{phi}"
        );
    }
}
