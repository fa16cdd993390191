use std::process::Command;

use sra_cli::{emit_result, parse_args, RunSpec};
use sra_core::experiments::run_cdf_comparison;
use sra_core::Snr;

fn sra(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_sra"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn spec(s: &str) -> RunSpec {
    parse_args(std::iter::once("sra").chain(s.split_whitespace())).unwrap()
}

#[test]
fn params_rows() {
    let out = sra(&["params", "--L", "128", "--nt", "1,2", "--snr-db", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "L,nt,snr_db,xi,phi,beta,theta,mu,sigma,location,scale"
    );
    let one: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(&one[..6], &["128", "1", "0", "4.85203026392", "0", "1"]);
    let two: Vec<&str> = lines[2].split(',').collect();
    assert!((two[3].parse::<f64>().unwrap() - 4.84419).abs() < 1e-5);
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn invalid_config_is_a_usage_error() {
    let out = sra(&["params", "--L", "4", "--nt", "16"]);
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--L"));
    let out = sra(&["cdf", "--nope"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--nope"));
}

#[test]
fn capacity_rows_sweep_the_snr_axis() {
    let out = sra(&["capacity", "--nt", "2", "--trials", "500", "--seed", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let snrs: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(snrs, vec![-20.0, -15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0]);
}

#[test]
fn cdf_blocks_are_monotone() {
    let out = sra(&["cdf", "--L", "64", "--nt", "1,4", "--trials", "2000"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut last: Option<(String, f64)> = None;
    let mut rows = 0;
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let key = f[1].to_string();
        let analytic: f64 = f[5].parse().unwrap();
        if let Some((k, prev)) = &last {
            if *k == key {
                assert!(analytic >= *prev);
            }
        }
        last = Some((key, analytic));
        rows += 1;
    }
    assert_eq!(rows, 2 * 512);
}

#[test]
fn json_round_trips_at_twelve_digits() {
    let out = sra(&["hardening", "--trials", "1000", "--format", "json", "--seed", "5"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["meta"]["seed"], 5);
    assert_eq!(doc["meta"]["trials"], 1000);
    assert!(doc["meta"]["version"].is_string());
    let csv = sra(&["hardening", "--trials", "1000", "--seed", "5"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    let results = doc["results"].as_array().unwrap();
    assert_eq!(results.len(), 4);
    for (row, line) in results.iter().zip(text.lines().skip(1)) {
        let fields: Vec<&str> = line.split(',').collect();
        let mean: f64 = fields[3].parse().unwrap();
        assert_eq!(row["empirical_mean"].as_f64().unwrap(), mean);
        let reparsed: f64 = serde_json::to_string(&row["beta"]).unwrap().parse().unwrap();
        assert_eq!(reparsed, row["beta"].as_f64().unwrap());
    }
}

#[test]
fn output_file_and_unwritable_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("params.csv");
    let out = sra(&["params", "--nt", "2", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("L,nt,"));
    let bad = dir.path().join("missing").join("x.csv");
    let out = sra(&["params", "-o", bad.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot write"));
}

#[test]
fn all_invalid_cells_give_header_only() {
    // a single admissible window is outside the asymptotic regime
    let result = run_cdf_comparison(8, &[8], Snr::from_db(0.0).unwrap(), 100, 0).unwrap();
    let s = spec("cdf --L 16 --nt 8");
    let table = emit_result(&result, &s);
    assert_eq!(table.valid_cells, 0);
    assert_eq!(sra_cli::render(&table, &s), "L,nt,snr_db,x,empirical_cdf,analytic_cdf\n");
    assert!(table.warnings.iter().any(|w| w.contains("regime")));
}

#[test]
fn dependency_single_aperture_is_flagged_vacuous() {
    let out = sra(&["dependency", "--nt", "1", "--trials", "100"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",vacuous")));
}
