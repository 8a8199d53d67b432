use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plasmon-qd"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig5.csv");
    let o = bin(&["run", "--scenario", "fig5", "--a", "0:1:21", "--output", path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("a,total_printed,"));
    assert_eq!(lines.count(), 21);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("fig5.csv.report.json")).unwrap()).unwrap();
    assert_eq!(report["scenario"], "fig5");
    assert_eq!(report["rows"], 21);
    for key in ["parameters", "max_trace_drift", "max_positivity_violation", "oracle", "exit_code"] {
        assert!(report.get(key).is_some(), "{key}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let out = dir.path().join(name);
        let o = bin(&["run", "--scenario", "fig2", "--t-max", "2", "--samples", "201", "--output", path(&out)]);
        assert_eq!(o.status.code(), Some(0));
    }
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    let b = fs::read(dir.path().join("b.csv")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("steady.cfg");
    fs::write(&cfg, "# stationary F1 point\nscenario = steady\nmu = -1   # F1\na = 0.5\n").unwrap();
    let o = bin(&["run", "--config", path(&cfg), "--mu", "1", "--a", "1", "--report", path(&dir.path().join("r.json"))]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    let row: Vec<&str> = stdout.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "1.00000000000e0");
    assert_eq!(row[1], "1.00000000000e0");
    let q: f64 = row[5].parse().unwrap();
    assert!((q - 0.38).abs() < 0.01);
}

#[test]
fn json_output_carries_matrices() {
    let o = bin(&["sweep", "--mu", "1", "--a", "1", "--format", "json", "--report", "/dev/null"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let state = &v["states"][0]["matrix"];
    assert_eq!(state["re"].as_array().unwrap().len(), 4);
    assert_eq!(state["im"][0].as_array().unwrap().len(), 4);
}

#[test]
fn config_errors_exit_1() {
    assert_eq!(bin(&["run", "--scenario", "fig9"]).status.code(), Some(1));
    assert_eq!(bin(&["run", "--scenario", "steady", "--mu", "0"]).status.code(), Some(1));
    assert_eq!(bin(&["run", "--scenario", "fig1", "--a", "1.5"]).status.code(), Some(1));
    assert_eq!(bin(&["run", "--no-such-flag", "1"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "scenario=fig1\nspeed=11\n").unwrap();
    assert_eq!(bin(&["run", "--config", path(&cfg)]).status.code(), Some(1));
    fs::write(&cfg, "scenario fig1\n").unwrap();
    assert_eq!(bin(&["run", "--config", path(&cfg)]).status.code(), Some(1));
}

#[test]
fn unstable_integration_exits_2() {
    let o = bin(&["run", "--scenario", "evolve", "--mu", "1", "--dt", "1", "--t-max", "50", "--record-stride", "1"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn discord_oracle_check_passes_with_brute_force() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    let o = bin(&["run", "--scenario", "discord", "--brute-resolution", "61", "--output", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let header = fs::read_to_string(&out).unwrap().lines().next().unwrap().to_string();
    assert!(header.contains("brute_force_discord"), "{header}");
}

#[test]
fn validate_prints_table_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("validate.json");
    let o = bin(&["validate", "--report", path(&report)]);
    let table = String::from_utf8(o.stdout).unwrap();
    assert_eq!(o.status.code(), Some(0), "{table}");
    assert_eq!(table.lines().filter(|l| l.contains("PASS")).count(), 10, "{table}");
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert!(!v["generator_discrepancies"].as_array().unwrap().is_empty());
    assert!(!v["formula_deviations"].as_array().unwrap().is_empty());
}

#[test]
fn unphysical_transcription_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let o = bin(&[
        "run", "--scenario", "evolve", "--mode", "appendix", "--variant", "printed", "--mu", "-1", "--t-max", "2", "--output",
        path(&out),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("p.csv.report.json")).unwrap()).unwrap();
    assert_eq!(report["exit_code"], 3);
    assert!(report["oracle"].as_array().unwrap().iter().any(|c| c["passed"] == false));
}
