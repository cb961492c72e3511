use std::process::{Command, Output};

use bellkey::attack::AttackVariant;
use bellkey::harness::{ScanRecord, StateFile, CSV_HEADER};
use bellkey::multiparty::ghz_state;
use bellkey::numeric::PureState;

fn bellkey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellkey"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

#[test]
fn analyze_reference_points() {
    let o = bellkey(&["analyze", "--alpha", "0", "--beta", "0"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(field(&s, "chsh"), "1.414214");
    assert_eq!(field(&s, "iab"), "1.000000");
    assert_eq!(field(&s, "iae"), "0.000000");

    let s = stdout(&bellkey(&[
        "analyze", "--alpha", "0.3927", "--beta", "0.3927",
    ]));
    assert_eq!(field(&s, "violates"), "1");
    assert_eq!(field(&s, "consistent"), "1");

    let s = stdout(&bellkey(&[
        "analyze",
        "--alpha",
        "0.3",
        "--beta",
        "0.5",
        "--variant",
        "symmetric",
    ]));
    assert_eq!(field(&s, "iae"), field(&s, "ibe"));

    let deg = stdout(&bellkey(&[
        "analyze",
        "--alpha",
        "22.5",
        "--beta",
        "22.5",
        "--degrees",
    ]));
    assert_eq!(field(&deg, "chsh"), "1.224745");
}

#[test]
fn analyze_json_output() {
    let o = bellkey(&["analyze", "--alpha", "0.2", "--beta", "0.4", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["chsh"].as_f64().unwrap() > 1.0);
    assert!(v["ppt_min"].as_f64().unwrap() < 0.0);
}

#[test]
fn usage_and_domain_errors_exit_2() {
    assert_eq!(
        bellkey(&["analyze", "--alpha", "2", "--beta", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bellkey(&["analyze", "--alpha", "-0.1", "--beta", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(bellkey(&["analyze", "--alpha", "0"]).status.code(), Some(2));
    assert_eq!(
        bellkey(&["analyze", "--alpha", "0", "--beta", "0", "--variant", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(bellkey(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn scan_writes_deterministic_self_consistent_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for (path, variant) in [(&a, "one-qubit"), (&b, "one-qubit")] {
        let o = bellkey(&[
            "scan",
            "--grid",
            "3",
            "--variant",
            variant,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), "inconsistent=0");
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 9);
    for row in rows {
        let f: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        let rec = ScanRecord {
            alpha: f[0],
            beta: f[1],
            chsh: f[2],
            iab: f[3],
            iae: f[4],
            ibe: f[5],
            ppt_min: f[6],
            ck_direct: f[7] as u8,
            ck_reverse: f[8] as u8,
            violates: f[9] as u8,
            consistent: f[10] as u8,
        };
        let (direct, reverse, violates, consistent) = rec.derived_flags(AttackVariant::OneQubit);
        assert_eq!(
            (rec.ck_direct, rec.ck_reverse, rec.violates, rec.consistent),
            (
                direct as u8,
                reverse as u8,
                violates as u8,
                consistent as u8
            )
        );
    }
}

#[test]
fn scan_to_unwritable_path_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    assert_eq!(
        bellkey(&["scan", "--grid", "3", "--out", bad.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn multiparty_ghz_and_state_files() {
    let s = stdout(&bellkey(&[
        "multiparty",
        "--ghz",
        "3",
        "--functional",
        "mk",
    ]));
    assert_eq!(field(&s, "value"), "2.000000");
    assert_eq!(field(&s, "degree"), "FullDistillability");

    let s = stdout(&bellkey(&["multiparty", "--ghz", "4"]));
    let v: f64 = field(&s, "value").parse().unwrap();
    assert!((v - 2.828427).abs() < 1e-5);

    let dir = tempfile::tempdir().unwrap();
    let product = dir.path().join("product.json");
    std::fs::write(
        &product,
        StateFile::from_pure(&PureState::basis(3, 0b010)).to_json(),
    )
    .unwrap();
    let s = stdout(&bellkey(&[
        "multiparty",
        product.to_str().unwrap(),
        "--functional",
        "wwzb",
    ]));
    assert!(field(&s, "value").parse::<f64>().unwrap() <= 1.0 + 1e-6);
    assert_eq!(field(&s, "degree"), "NoConclusion");

    let ghz = dir.path().join("ghz.json");
    let rho = ghz_state(3).density();
    let file = StateFile {
        num_qubits: 3,
        amplitudes: None,
        density_matrix: Some(rho.as_slice().iter().map(|z| [z.re, z.im]).collect()),
    };
    std::fs::write(&ghz, file.to_json()).unwrap();
    let s = stdout(&bellkey(&["multiparty", ghz.to_str().unwrap()]));
    assert_eq!(field(&s, "value"), "2.000000");

    let broken = dir.path().join("broken.json");
    std::fs::write(
        &broken,
        r#"{"num_qubits": 1, "amplitudes": [[1, 0], [1, 0]]}"#,
    )
    .unwrap();
    assert_eq!(
        bellkey(&["multiparty", broken.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("absent.json");
    assert_eq!(
        bellkey(&["multiparty", missing.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn verify_passes_with_seed_independent_verdicts() {
    let verdicts = |seed: &str| {
        let o = bellkey(&["verify", "--seed", seed]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        stdout(&o)
            .lines()
            .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
            .map(|l| l[..4].to_string())
            .collect::<Vec<_>>()
    };
    let (a, b) = (verdicts("7"), verdicts("8"));
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert!(bellkey(&["verify"]).status.success());
}
