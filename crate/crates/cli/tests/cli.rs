use std::path::Path;
use std::process::Command;

use sgedr::sg;
use sgedr_cli::{run, EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION};

fn sgedr(args: &[&str]) -> (u8, String) {
    let mut out = Vec::new();
    let code = run(std::iter::once("sgedr").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

/// Header, column names and parsed rows of one CSV block.
fn parse_csv(text: &str) -> (String, Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let columns = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .take_while(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, columns, rows)
}

fn column(columns: &[String], name: &str) -> usize {
    columns.iter().position(|c| c == name).unwrap()
}

#[test]
fn lw_sweep_is_tight() {
    let (code, out) = sgedr(&["lw", "--steps", "5"]);
    assert_eq!(code, EXIT_OK);
    let (header, columns, rows) = parse_csv(&out);
    assert_eq!(header, "# sgedr lw v1");
    assert_eq!(rows.len(), 5);
    let get = |r: &Vec<String>, c: &str| r[column(&columns, c)].parse::<f64>().unwrap();
    for r in &rows {
        assert!((get(r, "tight_lhs") - 4.0).abs() < 1e-12);
    }
    assert!(get(&rows[0], "eps").abs() < 1e-15);
    let quarter = &rows[2];
    assert!((get(quarter, "theta") - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    assert!(get(quarter, "eta").abs() < 1e-15);
}

#[test]
fn lw_json_rows() {
    let (code, out) = sgedr(&["lw", "--steps", "3", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["schema"], "sgedr lw v1");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
    assert!(doc["rows"][2]["eps_sq"].as_f64().unwrap() > 3.99);
}

#[test]
fn region_sweep_writes_table_and_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("region.csv");
    let (code, _) = sgedr(&["region", "--steps", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);

    let (header, columns, rows) = parse_csv(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(header, "# sgedr region v1");
    assert_eq!(rows.len(), 4usize.pow(4));
    assert!(rows.iter().all(|r| r[column(&columns, "in_region")] == "true"));
    assert!(rows.iter().all(|r| r[column(&columns, "tight_ok")] == "true"));
    assert!(rows.iter().any(|r| r[column(&columns, "heisenberg_violated")] == "true"));

    let (header, columns, rows) = parse_csv(&std::fs::read_to_string(dir.path().join("region_boundary.csv")).unwrap());
    assert_eq!(header, "# sgedr region-boundary v1");
    assert_eq!(rows.len(), 1024);
    for r in &rows {
        let eps_sq: f64 = r[column(&columns, "eps_sq")].parse().unwrap();
        let bound: f64 = r[column(&columns, "bound")].parse().unwrap();
        assert_eq!(bound, sg::region_bound(eps_sq).unwrap());
    }
    let first: f64 = rows[0][column(&columns, "bound")].parse().unwrap();
    let last: f64 = rows[1023][column(&columns, "bound")].parse().unwrap();
    assert_eq!((first, last), (0.0, 0.0));
    assert!((sg::region_bound(2.0).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn region_json_embeds_boundary() {
    let (code, out) = sgedr(&["region", "--steps", "2", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 16);
    assert_eq!(doc["boundary"].as_array().unwrap().len(), 1024);
}

#[test]
fn experiment_defaults_report_published_mismatches() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let (code, out) = sgedr(&["experiment", "--out", json.to_str().unwrap()]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(out.contains("Heisenberg EDR: VIOLATED"));
    assert!(out.contains("MISMATCH"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["rows"].as_array().unwrap().len(), 5);
    assert_eq!(report["eta_sq"].as_f64().unwrap(), 2.0);
    let p = report["error_probability"].as_f64().unwrap();
    assert!((0.085..0.0853).contains(&p));
}

#[test]
fn experiment_modified_apparatus_skips_cross_checks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("hot.cfg");
    std::fs::write(&cfg, "# hotter oven\nT = 1800\nK_steps = 3\n").unwrap();
    let (code, out) = sgedr(&["experiment", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("skipped"));
    let json_start = out.find('{').unwrap();
    let report: serde_json::Value = serde_json::from_str(&out[json_start..]).unwrap();
    assert_eq!(report["config"]["temperature"].as_f64().unwrap(), 1800.0);
    assert_eq!(report["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn experiment_malformed_config_fails() {
    let dir = tempfile::tempdir().unwrap();
    for text in ["T = hot\n", "speed = 3\n", "K_min = 0.9\nK_max = 0.7\n", "d2\n"] {
        let cfg = dir.path().join("bad.cfg");
        std::fs::write(&cfg, text).unwrap();
        let (code, _) = sgedr(&["experiment", "--config", cfg.to_str().unwrap()]);
        assert_ne!(code, EXIT_OK, "accepted {text:?}");
    }
    let (code, _) = sgedr(&["experiment", "--config", "/nonexistent/sgedr.cfg"]);
    assert_eq!(code, EXIT_IO);
}

#[test]
fn tau_opt_scan_has_minimum_at_optimum() {
    let (code, out) = sgedr(&["tau-opt", "--re-lambda", "0.2", "--im-lambda", "0.4", "--b1", "1.5", "--steps", "101"]);
    assert_eq!(code, EXIT_OK);
    let (header, columns, rows) = parse_csv(&out);
    assert_eq!(header, "# sgedr tau-opt v1");
    let eps: Vec<f64> = rows.iter().map(|r| r[column(&columns, "eps_sq")].parse().unwrap()).collect();
    let argmin = (0..eps.len()).min_by(|&a, &b| eps[a].total_cmp(&eps[b])).unwrap();
    // the scan spans [0, 100 τ₀], so the optimum sits at the second sample
    assert_eq!(argmin, 1);
}

#[test]
fn coarse_grid_validation_fails() {
    let (code, out) = sgedr(&["validate", "--grid-n", "256"]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(out.contains("ERROR") || out.contains("FAIL"));
}

#[test]
fn unwritable_output_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("lw.csv");
    let (code, _) = sgedr(&["lw", "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_IO);
    assert!(!Path::new(&path).exists());
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(sgedr(&["lw", "--steps", "many"]).0, EXIT_USAGE);
    assert_eq!(sgedr(&["lw", "--steps", "1"]).0, EXIT_USAGE);
    assert_eq!(sgedr(&["region", "--tau", "3:1"]).0, EXIT_USAGE);
    assert_eq!(sgedr(&["tau-opt", "--re-lambda", "-1"]).0, EXIT_USAGE);
    assert_eq!(sgedr(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(sgedr(&["--help"]).0, EXIT_OK);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_sgedr");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["lw", "--steps", "3"]), Some(0));
    assert_eq!(status(&["experiment"]), Some(2));
    assert_eq!(status(&["lw", "--bogus"]), Some(4));
}
