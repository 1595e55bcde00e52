use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rabi_thermo_cli::output::SweepDocument;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rabi-thermo"))
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(i).unwrap().to_string()).collect()
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("fig3-T5.conf");
    let mut outs = vec![];
    for name in ["a.csv", "b.csv"] {
        let path = dir.path().join(name);
        let o = run(&[
            "sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        outs.push(std::fs::read(path).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
    assert!(!outs[0].is_empty());
}

#[test]
fn json_round_trips_byte_for_byte() {
    let text = stdout(&run(&[
        "sweep",
        "--steps",
        "20",
        "--lambda-min",
        "0",
        "--lambda-max",
        "12",
        "--relative-grid",
        "false",
        "--format",
        "json",
    ]));
    let doc: SweepDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.to_json(), text);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&value).unwrap() + "\n", text);
    assert_eq!(doc.rows.len(), 20);
    assert!(doc.rows.last().unwrap().error.is_some());
    assert_eq!(doc.metadata.regime, "spin");
}

#[test]
fn zero_coupling_renders_inf() {
    let csv = stdout(&run(&[
        "sweep",
        "--steps",
        "3",
        "--relative-grid",
        "false",
        "--lambda-max",
        "4",
    ]));
    for col in ["var_qfi", "var_photon", "var_q2", "var_p2"] {
        assert_eq!(column(&csv, col)[0], "inf");
    }
    assert!(!csv.lines().next().unwrap().contains("error"));
}

#[test]
fn error_column_only_when_grid_crosses_cp() {
    let csv = stdout(&run(&[
        "sweep",
        "--steps",
        "4",
        "--relative-grid",
        "false",
        "--lambda-max",
        "12",
    ]));
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "lambda,lambda_over_lambda_c,tau,phase,qfi,var_qfi,var_photon,var_q2,var_p2,error"
    );
    let phase = column(&csv, "phase");
    assert_eq!(phase.last().unwrap(), "superradiant");
    assert_eq!(column(&csv, "tau").last().unwrap(), "inf");
    assert_eq!(column(&csv, "var_qfi").last().unwrap(), "nan");
}

#[test]
fn unselected_estimators_are_nan() {
    let csv = stdout(&run(&["sweep", "--steps", "3", "--estimators", "photon"]));
    assert!(column(&csv, "var_qfi").iter().all(|v| v == "nan"));
    assert!(column(&csv, "var_q2").iter().all(|v| v == "nan"));
    assert!(column(&csv, "var_photon")
        .iter()
        .all(|v| v.parse::<f64>().unwrap().is_finite()));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# test\nT = 20\nsteps = 7\nformat = json\nlambda_min = 0.1\n").unwrap();
    let text = stdout(&run(&["sweep", "--config", cfg.to_str().unwrap(), "--steps", "3"]));
    let doc: SweepDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.rows.len(), 3);
    assert_eq!(doc.metadata.config.temperature, 20.0);
    assert_eq!(doc.metadata.config.lambda_min, 0.1);
}

#[test]
fn fig1_panel_is_strictly_decreasing() {
    let cfg = configs_dir().join("fig1-T10.conf");
    let csv = stdout(&run(&["sweep", "--config", cfg.to_str().unwrap()]));
    let v: Vec<f64> = column(&csv, "var_qfi").iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(v.len(), 200);
    assert!(v.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn every_shipped_config_runs() {
    let mut n = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        let csv = stdout(&run(&["sweep", "--config", path.to_str().unwrap()]));
        assert!(!csv.lines().next().unwrap().contains("error"), "{}", path.display());
        n += 1;
    }
    assert_eq!(n, 13);
}

#[test]
fn diagnose_reports_phase() {
    let text = stdout(&run(&["diagnose", "--lambda", "5"]));
    assert!(text.contains("phase       normal"));
    assert!(text.contains("lambda_c    9.3036"));
    let text = stdout(&run(&["diagnose", "--lambda", "12", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["phase"], "superradiant");
    assert_eq!(v["tau"], "inf");
    assert_eq!(v["fixed_points"].as_array().unwrap().len(), 3);
    assert_eq!(v["fixed_points"][0]["stable"], false);
}

#[test]
fn invalid_parameters_exit_2() {
    for args in [
        vec!["diagnose", "--lambda", "5", "--kappa", "0"],
        vec!["sweep", "--kappa", "-1"],
        vec!["sweep", "--T", "0"],
        vec!["sweep", "--relative-grid", "false"],
        vec!["sweep", "--steps", "0"],
        vec!["sweep", "--lambda-max", "1.5"],
        vec!["diagnose"],
        vec!["sweep", "--regime", "fast"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = run(&["sweep", "--kappa", "0"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("kappa"));
}

#[test]
fn bad_config_file_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "temperature = 3\n").unwrap();
    assert_eq!(
        run(&["sweep", "--config", cfg.to_str().unwrap()]).status.code(),
        Some(2)
    );
    std::fs::write(&cfg, "T 3\n").unwrap();
    assert_eq!(
        run(&["sweep", "--config", cfg.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn io_failures_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.conf");
    assert_eq!(
        run(&["sweep", "--config", missing.to_str().unwrap()]).status.code(),
        Some(3)
    );
    let out = dir.path().join("no/such/dir/out.csv");
    assert_eq!(
        run(&["sweep", "--steps", "2", "--output", out.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
}
