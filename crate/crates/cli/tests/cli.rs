//! End-to-end behavior of the binary: exit codes, report shapes, config
//! merging, and singular-row handling.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_bosonstat"))
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scenario_path(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn tmp_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("bosonstat-cli-test-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn missing_required_flag_is_usage_error() {
    let o = run(&["laser", "--alpha", "2", "--beta", "2e-4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--gamma"));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn laser_json_report_shape() {
    let o = run(&["laser", "--alpha", "2", "--beta", "2e-4", "--gamma", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "laser");
    assert_eq!(v["n_bar"], 10000.0);
    assert!(v["entropy"]["direct_sum"].is_f64());
    assert!(v["entropy"]["closed_form"].is_f64());
    assert!(v["distributions"]["exact"]["mean"].is_f64());
}

#[test]
fn laser_csv_single_row() {
    let o = run(&[
        "laser", "--alpha", "2", "--beta", "2e-4", "--gamma", "1", "--format", "csv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.contains("s_direct") && header.contains("s_closed"));
    assert_eq!(lines.count(), 1);
}

#[test]
fn below_threshold_laser_reports_thermal_closed_form() {
    let o = run(&["laser", "--alpha", "0.5", "--beta", "1e-9", "--gamma", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["params"]["regime"], "below_threshold");
    assert_eq!(v["n_bar"], 1.0);
    assert_eq!(v["entropy"]["closed_form_method"], "closed_form_thermal");
}

#[test]
fn laser_dist_dir_writes_csv_files() {
    let dir = tmp_dir("distdir");
    let dist = dir.join("dists");
    let o = run(&[
        "laser",
        "--alpha",
        "1.5",
        "--beta",
        "2.25e-3",
        "--gamma",
        "1",
        "--dist-dir",
        dist.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    for name in ["exact.csv", "shifted_poisson.csv", "gaussian.csv"] {
        let text = std::fs::read_to_string(dist.join(name)).unwrap();
        assert!(text.starts_with("n,prob\n"), "{name} lacks header");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bec_rejects_unreduced_temperature() {
    let o = run(&["bec", "--n", "1000", "--t", "1.2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bec_zero_temperature_row() {
    let o = run(&["bec", "--n", "1000", "--t", "0", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    let cells: Vec<&str> = row.split(',').collect();
    assert_eq!(cells[0], "0"); // t
    assert_eq!(cells[5], "0"); // s_direct
}

#[test]
fn bec_sweep_csv_rows() {
    let o = run(&[
        "bec", "--n", "500", "--sweep-t", "0.05:0.95:19", "--format", "csv",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 20); // header + 19 rows
}

#[test]
fn engine_scenarios_and_verdicts() {
    let o = run(&["engine", "--scenario", &scenario_path("optical.json")]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["maser_term_verdict"], "negligible");
    assert_eq!(v["carnot"]["satisfied"], true);

    let o = run(&["engine", "--scenario", &scenario_path("maser.json")]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["maser_term_verdict"], "comparable");
}

#[test]
fn engine_rejects_cold_hotter_than_hot() {
    let dir = tmp_dir("coldhot");
    let path = dir.join("inverted.json");
    std::fs::write(
        &path,
        r#"{"hot": {"photon_energy_ev": 1.0, "temperature_ev": 0.5},
            "cold": {"photon_energy_ev": 0.5, "temperature_ev": 1.0},
            "maser_occupation": 1e6, "photon_rate": 1.0}"#,
    )
    .unwrap();
    let o = run(&["engine", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("temperature"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn engine_rejects_inconsistent_maser_frequency() {
    let dir = tmp_dir("nonconserving");
    let path = dir.join("badline.json");
    std::fs::write(
        &path,
        r#"{"hot": {"photon_energy_ev": 1.0, "temperature_ev": 1.0},
            "cold": {"photon_energy_ev": 0.5, "temperature_ev": 0.4},
            "maser_frequency_ev": 0.6,
            "maser_occupation": 1e6, "photon_rate": 1.0}"#,
    )
    .unwrap();
    let o = run(&["engine", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("energy conservation"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn engine_parse_error_carries_line_info() {
    let dir = tmp_dir("badjson");
    let path = dir.join("broken.json");
    std::fs::write(&path, "{\n  \"hot\": {\n").unwrap();
    let o = run(&["engine", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn evolve_divergent_custom_table_is_numerical_failure() {
    let dir = tmp_dir("divergent");
    let path = dir.join("rates.csv");
    let mut table = String::from("n,gain,loss\n");
    for n in 0..100 {
        table.push_str(&format!("{n},2.0,1.0\n"));
    }
    std::fs::write(&path, table).unwrap();
    let o = run(&[
        "evolve",
        "--model",
        "custom",
        "--rate-table",
        path.to_str().unwrap(),
        "--initial",
        "vacuum",
        "--t-final",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("non-normalizable"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn evolve_laser_trajectory_columns() {
    let dir = tmp_dir("traj");
    let traj = dir.join("t.csv");
    let o = run(&[
        "evolve", "--model", "laser", "--alpha", "1.5", "--beta", "0.01",
        "--gamma", "1", "--initial", "vacuum", "--t-final", "10",
        "--stride", "500", "--traj", traj.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&traj).unwrap();
    assert!(text.starts_with("t,mean,variance,entropy\n"));
    assert!(text.lines().count() > 3);
    // entropy rises from the vacuum and saturates
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    let s_first = rows.first().unwrap()[3];
    let s_last = rows.last().unwrap()[3];
    assert!(s_first < 1e-12);
    assert!(s_last > 1.0);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn table1_factor_of_two_fields() {
    let o = run(&[
        "table1", "--n-bar-h", "1e6", "--n-bar-l", "1e6", "--nu-over-q", "1",
        "--kappa", "1",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["linewidth_ratio_at_equal_occupation"], 2.0);
    assert_eq!(v["flux_ratio_at_equal_occupation"], 2.0);
    assert_eq!(v["below"]["linewidth"], 1e-6);
    assert_eq!(v["above"]["linewidth"], 5e-7);
}

#[test]
fn table1_zero_throughput_zeroes_flux_row() {
    let o = run(&[
        "table1", "--n-bar-h", "10", "--n-bar-l", "10", "--nu-over-q", "1",
        "--kappa", "0",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["below"]["entropy_flux"], 0.0);
    assert_eq!(v["above"]["entropy_flux"], 0.0);
}

#[test]
fn sweep_crosses_threshold_without_aborting() {
    let o = run(&[
        "sweep", "--parameter", "pump-ratio", "--start", "0.5", "--stop", "1.5",
        "--steps", "5", "--gamma", "1", "--beta", "1e-3",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    assert!(text.contains("at-threshold"));
}

#[test]
fn sweep_validates_range() {
    let o = run(&[
        "sweep", "--parameter", "pump-ratio", "--start", "2", "--stop", "1",
        "--steps", "5", "--gamma", "1", "--beta", "1e-3",
    ]);
    assert_eq!(o.status.code(), Some(3));

    let o = run(&[
        "sweep", "--parameter", "pump-ratio", "--start", "1", "--stop", "2",
        "--steps", "1", "--gamma", "1", "--beta", "1e-3",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn sweep_output_column_filter() {
    let o = run(&[
        "sweep", "--parameter", "n-bar", "--start", "1", "--stop", "100",
        "--steps", "3", "--outputs", "n_bar,s_thermal",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "n_bar,s_thermal");

    let o = run(&[
        "sweep", "--parameter", "n-bar", "--start", "1", "--stop", "100",
        "--steps", "3", "--outputs", "nonsense",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn config_file_supplies_and_flags_override() {
    let dir = tmp_dir("config");
    let cfg = dir.join("laser.json");
    std::fs::write(&cfg, r#"{"alpha": 2.0, "beta": 2e-4, "gamma": 1.0}"#).unwrap();

    let o = run(&["laser", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n_bar"], 10000.0);

    // an explicit flag wins over the file
    let o = run(&["laser", "--config", cfg.to_str().unwrap(), "--alpha", "4.0"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["params"]["alpha"], 4.0);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn identical_invocations_are_byte_identical() {
    let a = run(&["bec", "--n", "800", "--sweep-t", "0.1:0.9:9", "--format", "csv"]);
    let b = run(&["bec", "--n", "800", "--sweep-t", "0.1:0.9:9", "--format", "csv"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
