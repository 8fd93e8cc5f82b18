use std::path::Path;
use std::process::{Command, Output};

use resum::cli::run::{execute, RunReport};

fn resum(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resum"))
        .args(args)
        .current_dir(dir)
        .env_remove("RESUM_PRECISION")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const D0: &str = "name = \"quartic integral\"\n[generator]\nkind = \"d0\"\norder = 40\n";

#[test]
fn pade_of_alternating_geometric() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "alt.toml", "name = \"alt\"\ncoefficients = [\"1\", \"-1\", \"1\", \"-1\"]\n");
    let out = resum(&["sum", "alt.toml", "--method", "pade", "--L", "0", "--M", "1", "--g", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("value = 5.0000000"), "{stdout}");
}

#[test]
fn odm_strong_coupling_at_order_30() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "d0.toml", D0);
    let out = resum(
        &[
            "sum", "d0.toml", "--method", "odm", "--alpha", "2", "--prefactor-p", "1/2", "--g", "inf",
            "--order", "30", "--out", "r.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = RunReport::from_json(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    let v: f64 = report.records[0].value.as_ref().unwrap().parse().unwrap();
    // closed-form amplitude 1.6007147824...; |delta| is a few 1e-11 at this order
    assert!((v - 1.600_714_782_452_612).abs() < 1e-9, "{v}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "d0.toml", D0);
    // inconsistent flags
    let out = resum(&["sum", "d0.toml", "--method", "pade", "--L", "1", "--M", "1", "--g", "1", "--sigma", "1"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    // missing file
    let out = resum(&["sum", "nope.toml", "--method", "pade", "--L", "1", "--M", "1", "--g", "1"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    // unknown table
    let out = resum(&["reproduce", "table-9"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    // all checks met
    let out = resum(&["reproduce", "saddle-table"], dir.path());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn malformed_file_reports_its_line() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.toml", "name = \"x\"\n\ncoefficients = [\"1\",\n");
    let out = resum(&["sum", "bad.toml", "--method", "pade", "--L", "0", "--M", "0", "--g", "1"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("parse error at bad.toml:"), "{err}");
}

#[test]
fn precision_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_resum"))
        .args(["reproduce", "saddle-table", "--out", "r.json"])
        .current_dir(dir.path())
        .env("RESUM_PRECISION", "40")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("r.json")).unwrap();
    assert!(text.contains("\"precision\": 40"), "{text}");
}

#[test]
fn identical_runs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "d0.toml", D0);
    let args = [
        "study", "d0.toml", "--alpha", "2", "--prefactor-p", "1/2", "--min-order", "4", "--max-order", "20",
        "--oracle", "quadrature",
    ];
    let run = |tag: &str| {
        let json = format!("{tag}.json");
        let csv = format!("{tag}.csv");
        let mut a: Vec<&str> = args.to_vec();
        a.extend(["--out", &json, "--csv", &csv]);
        let out = resum(&a, dir.path());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        (
            std::fs::read(dir.path().join(&json)).unwrap(),
            std::fs::read(dir.path().join(&csv)).unwrap(),
        )
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn config_echo_replays_the_report() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "d0.toml", D0);
    let out = resum(
        &[
            "study", "d0.toml", "--alpha", "2", "--prefactor-p", "1/2", "--min-order", "4", "--max-order", "16",
            "--g", "2", "--oracle", "quadrature", "--out", "r.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("r.json")).unwrap();
    let report = RunReport::from_json(&text).unwrap();
    assert_eq!(report.schema, 1);
    let replay = execute(&report.config).unwrap();
    assert_eq!(replay, report);
    assert_eq!(replay.to_json().unwrap() + "\n", text);
}

#[test]
fn custom_series_falls_back_to_error_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs: Vec<String> = (0..=12).map(|k| format!("\"{}\"", if k % 2 == 0 { 1 } else { -1 })).collect();
    write(dir.path(), "geo.toml", &format!("name = \"geo\"\ncoefficients = [{}]\n", coeffs.join(", ")));
    let out = resum(
        &["study", "geo.toml", "--alpha", "2", "--g", "1", "--min-order", "2", "--max-order", "11", "--oracle", "quadrature", "--out", "r.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = RunReport::from_json(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert!(report.notes.iter().any(|n| n.contains("not available")));
    assert!(report.records.iter().all(|r| r.delta.is_none() && r.error_estimate.is_some()));
}
