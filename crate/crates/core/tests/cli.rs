use std::f64::consts::FRAC_PI_2;
use std::fs;

use serde_json::Value;
use spinorbit::bell::fringe_fit;
use spinorbit::cli::{run_with, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("spinorbit").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn parse_rows(csv: &str) -> (String, Vec<Vec<f64>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn field_writes_radial_pattern() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    let p = path.to_str().unwrap();
    let (code, stdout, _) = run(&[
        "field", "--q", "1/2", "--theta", "0", "--rings", "8", "--points", "64", "--out", p,
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    let (header, rows) = parse_rows(&text);
    assert_eq!(header, "x,y,ex,ey");
    assert_eq!(rows.len(), 512);
    for r in rows {
        let (x, y, ex, ey) = (r[0], r[1], r[2], r[3]);
        assert!((ex * ex + ey * ey - 1.0).abs() < 1e-12);
        let rho = x.hypot(y);
        assert!((ex - x / rho).abs() < 1e-12 && (ey - y / rho).abs() < 1e-12);
    }
}

#[test]
fn fringe_fits_unit_visibility() {
    let (code, stdout, _) = run(&["fringe", "--q", "1", "--steps", "360"]);
    assert_eq!(code, EXIT_OK);
    let (header, rows) = parse_rows(&stdout);
    assert_eq!(header, "delta,coincidence");
    assert_eq!(rows.len(), 360);
    let samples: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
    let fit = fringe_fit(&samples).unwrap();
    assert!((fit.visibility - 1.0).abs() < 1e-9);
    assert!((fit.period - FRAC_PI_2).abs() < 1e-9);
}

#[test]
fn chsh_optimize_reports_tsirelson() {
    let (code, stdout, _) = run(&["chsh", "--q", "1", "--optimize"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    let s = v["S"].as_f64().unwrap();
    assert!((s - 2.828427125).abs() < 1e-9, "{s}");
    assert!((v["visibility"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(v["settings"]["beta_r_prime"].is_number());
    assert_eq!(v["optimized"], Value::Bool(true));
    // stable key order
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    let pos = |k: &str| stdout.find(&format!("\"{k}\"")).unwrap();
    let mut sorted_by_text = keys.clone();
    sorted_by_text.sort_by_key(|k| pos(k));
    assert_eq!(
        sorted_by_text,
        [
            "q",
            "theta",
            "S",
            "settings",
            "optimized",
            "visibility",
            "offset_delta0",
            "spectrum"
        ]
    );
}

#[test]
fn chsh_default_settings_and_negative_half_charge() {
    let (code, stdout, _) = run(&[
        "chsh",
        "--q",
        "-3/2",
        "--theta",
        "pi/4",
        "--spectrum",
        "gaussian",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert!((v["S"].as_f64().unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["q"], "-3/2");
}

#[test]
fn sample_reports_estimate() {
    let args = ["sample", "--q", "1", "--pairs", "100000", "--seed", "7"];
    let (code, stdout, _) = run(&args);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    let s_hat = v["s_hat"].as_f64().unwrap();
    let stderr = v["stderr"].as_f64().unwrap();
    assert!((s_hat - 2.0 * 2f64.sqrt()).abs() < 5.0 * stderr);
    for row in v["counts"].as_array().unwrap() {
        let total: u64 = row
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_u64().unwrap())
            .sum();
        assert_eq!(total, 100_000);
    }
    // identical flags and seed give identical bytes
    assert_eq!(run(&args).1, stdout);
}

#[test]
fn sample_with_explicit_settings() {
    let (code, stdout, _) = run(&[
        "sample",
        "--q",
        "1",
        "--pairs",
        "1000",
        "--settings",
        "0,0,0,0",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert!(v["S"].as_f64().unwrap().abs() <= 2.0);
}

#[test]
fn invalid_arguments_exit_2() {
    for args in [
        vec!["field", "--q", "0"],
        vec!["field", "--q", "0.5"],
        vec!["field", "--q", "1", "--rings", "0"],
        vec!["fringe", "--q", "1", "--steps", "4"],
        vec!["chsh", "--q", "1", "--spectrum", "square"],
        vec!["chsh", "--q", "1", "--sigma", "-1"],
        vec!["sample", "--q", "1", "--settings", "1,2"],
        vec!["sample", "--q", "1", "--pairs", "2"],
        vec!["bogus"],
        vec![],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn truncation_overflow_exits_3() {
    let (code, _, err) = run(&["chsh", "--q", "3", "--mmax", "4"]);
    assert_eq!(code, EXIT_NUMERIC);
    assert!(err.contains("m_max"));
}

#[test]
fn help_exits_0() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("fringe"));
}

#[test]
fn outputs_match_goldens() {
    let golden = |name: &str| {
        fs::read_to_string(format!(
            "{}/tests/golden/{name}",
            env!("CARGO_MANIFEST_DIR")
        ))
        .unwrap()
    };
    let (_, field, _) = run(&[
        "field", "--q", "3/2", "--theta", "pi/4", "--rings", "2", "--points", "6",
    ]);
    assert_eq!(field, golden("field_q3_2.csv"));
    let (_, chsh, _) = run(&["chsh", "--q", "1"]);
    assert_eq!(chsh, golden("chsh_q1.json"));
}

#[test]
fn field_three_fold_rows_repeat() {
    let (_, out, _) = run(&[
        "field", "--q", "3/2", "--theta", "pi/4", "--rings", "1", "--points", "12",
    ]);
    let (_, rows) = parse_rows(&out);
    // φ step 2π/12; three-fold symmetry shifts by 4 rows
    for i in 0..12 {
        let j = (i + 4) % 12;
        assert!((rows[i][2] - rows[j][2]).abs() < 1e-12);
        assert!((rows[i][3] - rows[j][3]).abs() < 1e-12);
    }
}
