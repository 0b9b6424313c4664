use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn timeop(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_timeop"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn timeop")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn entries(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

#[test]
fn scenarios_lists_registry_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = timeop(dir.path(), &["scenarios"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let names: Vec<&str> = text.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(
        names,
        [
            "vn-exact",
            "sharp-time",
            "schrodinger-recovery",
            "weyl-clock",
            "ordering-audit",
            "classical-convergence",
            "mean-values",
            "time-dispersion",
        ]
    );
    assert!(text.lines().all(|l| l.split_whitespace().count() > 1));
}

#[test]
fn unknown_scenario_fails_without_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = timeop(dir.path(), &["run", "--set", "scenario=nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error: unknown scenario 'nope'"));
    assert!(entries(dir.path()).is_empty());
}

#[test]
fn bad_config_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "scenario = vn-exact\n# comment\nclock_pts = 4\n").unwrap();
    let out = timeop(dir.path(), &["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line 3"), "{err}");
    assert_eq!(entries(dir.path()), ["run.conf"]);
}

#[test]
fn commensuration_failure_names_level() {
    let dir = tempfile::tempdir().unwrap();
    // ΔE = 1 on a ladder of step 0.8
    let out = timeop(
        dir.path(),
        &["run", "--set", "scenario=vn-exact", "--set", "clock_dt=0.2454369260617026"],
    );
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("commensuration") && err.contains("level 1"), "{err}");
    assert!(entries(dir.path()).is_empty());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "scenario = sharp-time\nclock_points = 8\noutput = a.json\n").unwrap();
    let out = timeop(
        dir.path(),
        &["run", "--config", "run.conf", "--set", "clock_points=4"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let report: Value = serde_json::from_slice(&fs::read(dir.path().join("a.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["scenario"], "sharp-time");
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["config"]["clock_points"], 4);
    assert_eq!(report["config"]["output"], "a.json");
    assert_eq!(report["payload"]["cases"].as_array().unwrap().len(), 2 * 4);
}

#[test]
fn csv_format_writes_table_beside_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = timeop(
        dir.path(),
        &["run", "--set", "scenario=time-dispersion", "--set", "format=csv", "--set", "output=td.json"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(entries(dir.path()), ["td.csv", "td.json"]);
    let csv = fs::read_to_string(dir.path().join("td.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("t,single_level,superposition_marginal,superposition_conditioned,model")
    );
    assert_eq!(lines.count(), 32);
}

#[test]
fn missing_scenario_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = timeop(dir.path(), &["run"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error: "));
}
