use std::process::{Command, Output};

fn maxaccel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxaccel"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn no_arguments_is_a_usage_error() {
    let out = maxaccel(&[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = maxaccel(&["fock-check", "--nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn invalid_value_produces_no_output() {
    for args in [
        &["pde-residual", "--rho0", "50"][..],
        &["transition", "--n-min", "10", "--n-max", "5"],
        &["inequality-scan", "--samples", "0"],
        &["mode-eval", "--mass", "-1"],
    ] {
        let out = maxaccel(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn constants_reports_derived_scales() {
    let out = maxaccel(&["constants", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    // Parse the raw tokens with the exact std parser.
    let field = |key: &str| -> f64 {
        let start = text.find(&format!("\"{key}\":")).unwrap() + key.len() + 3;
        let end = start + text[start..].find([',', '}']).unwrap();
        text[start..end].parse().unwrap()
    };
    for (key, frozen) in [
        ("a_max", 3.493584380086006e52),
        ("rho0", 2.572_717_021_301_409e-36),
        ("planck_mass", 2.176952449144808e-8),
    ] {
        let got = field(key);
        assert!((got - frozen).abs() <= 1e-15 * frozen, "{key}: {got}");
    }
    assert_eq!(field("G"), 6.674e-11);
}

#[test]
fn inequality_scan_passes() {
    let out = maxaccel(&["inequality-scan", "--samples", "100000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "beta,theta,x,gammaF,bound\n"
    );
}

#[test]
fn transition_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let svg = dir.path().join("t.svg");
    let out = maxaccel(&[
        "transition",
        "--points",
        "5",
        "--spacing",
        "linear",
        "--n-max",
        "1e24",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n_nucleons,mass_kg,ln_magnitude,log10_magnitude")
    );
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert_eq!(first[0], 1.0);
    assert_eq!(first[1], 1.7e-27);
    assert_eq!(lines.last().unwrap().split(',').next(), Some("1e24"));
    assert!(std::fs::read_to_string(svg).unwrap().contains("<polyline"));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let expected = -3.0 * std::f64::consts::LN_10 / -1.2298336511646458e-20;
    let got = v["threshold_n"].as_f64().unwrap();
    assert!((got - expected).abs() <= 1e-14 * expected);
}

#[test]
fn pde_residual_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let out = maxaccel(&[
        "pde-residual",
        "--points",
        "10",
        "--rho0",
        "1",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("t,x,y,z,v0,v1,v2,v3,abs_residual,rel_residual,h\n"));
    assert_eq!(text.lines().count(), 11);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["max_rel_residual"].as_f64().unwrap() < 1e-3);
    assert_eq!(v["prng"], "ChaCha8Rng/seed_from_u64");
}

#[test]
fn fock_check_exit_codes() {
    let out = maxaccel(&["fock-check", "--modes", "3", "--cutoff", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["subspace_dim"].as_u64(), Some(64));
    assert_eq!(
        maxaccel(&["fock-check", "--modes", "30", "--cutoff", "4"])
            .status
            .code(),
        Some(2)
    );
}
