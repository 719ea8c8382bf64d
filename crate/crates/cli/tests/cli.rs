use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ammonia(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ammonia"))
        .args(args)
        .env_remove("AMMONIA_DATA_DIR")
        .env_remove("AMMONIA_PARAMS")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = ammonia(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn row<'a>(csv: &'a str, first: &str) -> Vec<&'a str> {
    csv.lines()
        .find(|l| l.split(',').next() == Some(first))
        .unwrap_or_else(|| panic!("no row {first} in\n{csv}"))
        .split(',')
        .collect()
}

#[test]
fn gtfp_northwest_row() {
    let out = stdout(&["gtfp"]);
    assert_eq!(row(&out, "Northwest"), vec!["Northwest", "0.653", "18.51", "1.5069", "false"]);
    assert_eq!(out.lines().count(), 7);
}

#[test]
fn cofire_three_percent() {
    let out = stdout(&["cofire", "--rate", "0.03"]);
    let r = row(&out, "0.03");
    let lcoe_change: f64 = r[4].parse().unwrap();
    assert!((lcoe_change - 17.3371).abs() < 1e-9);
    assert_eq!(r[6], "-25.14");
}

#[test]
fn cofire_all_rates() {
    let out = stdout(&["cofire", "--all"]);
    assert_eq!(out.lines().count(), 7);
    assert_eq!(row(&out, "0")[4], "0");
}

#[test]
fn untabulated_rate_needs_interpolation() {
    assert_eq!(ammonia(&["cofire", "--rate", "0.04"]).status.code(), Some(2));
    assert!(ammonia(&["cofire", "--rate", "0.04", "--interpolate"]).status.success());
}

#[test]
fn json_output_parses() {
    let out = stdout(&["--format", "json", "scenario", "demand"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 25);
    let ship5 = rows.iter().find(|r| r["level"] == 5 && r["sector"] == "shipping").unwrap();
    assert_eq!(ship5["demand_mt"], 6.7529);
}

#[test]
fn exit_codes() {
    assert_eq!(ammonia(&["bogus"]).status.code(), Some(2));
    assert_eq!(ammonia(&["--help"]).status.code(), Some(0));
    assert_eq!(ammonia(&["gtfp", "--regions", "/nonexistent/regions.csv"]).status.code(), Some(2));
    assert_eq!(ammonia(&["carrier", "delivery", "--chain", "blimp"]).status.code(), Some(2));
    assert_eq!(ammonia(&["cofire", "--rate", "1.5"]).status.code(), Some(2));
}

#[test]
fn failed_run_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out.csv");
    let o = out.to_str().unwrap();
    assert_eq!(ammonia(&["-o", o, "cofire", "--rate", "0.03", "--rate", "0.04"]).status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn params_override_changes_results() {
    let tmp = tempfile::tempdir().unwrap();
    let f = tmp.path().join("coal.csv");
    fs::write(&f, "# namespace: cofiring\nkey,value,unit,provenance\ncoal_price,200,USD_per_tce,test\n").unwrap();
    let out = stdout(&["--params", f.to_str().unwrap(), "cofire", "--rate", "0"]);
    assert_eq!(row(&out, "0")[1], "200");
    let shown = stdout(&["--params", f.to_str().unwrap(), "params", "cofiring"]);
    assert!(shown.lines().any(|l| l.contains("coal_price,200,")));
}

#[test]
fn volume_clamp_warns() {
    let out = ammonia(&["carrier", "delivery", "--chain", "NH3_with_crack", "--volume", "200", "--distance", "500"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn report_writes_every_table() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("r");
    let out = ammonia(&["report", "--out", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut names: Vec<String> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 8);
    let gtfp = fs::read_to_string(Path::new(&dir).join("gtfp.csv")).unwrap();
    assert!(gtfp.starts_with("# "));
}

#[test]
fn verify_lists_ledger() {
    let out = stdout(&["verify"]);
    assert!(out.lines().any(|l| l.starts_with("calibration,coal_price_usd_per_tce,")));
}
