//! End-to-end tests of the `excichain` binary: file formats, exit codes,
//! determinism, and consistency between the subcommands.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn excichain(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_excichain"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

fn csv_column(text: &str, column: &str) -> Vec<f64> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header
        .iter()
        .position(|&h| h == column)
        .unwrap_or_else(|| panic!("column {column} in {header:?}"));
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

const TWO_SITE: &str = "
# excitation starts fully on site 1
[chain]
n_sites = 2
coupling = nearest_neighbor
strength = 1.0

[initial]
left_site = 1
rho_left = 1.0
rho_right = 0.0
coherence = 0.0

[propagation]
t_max = 3.14
dt = 0.001
output_stride = 157
";

#[test]
fn two_site_rabi_oscillation() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "two_site.cfg", TWO_SITE);
    let out = excichain(&["run", "--config", &cfg], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let traj = read(tmp.path(), "trajectory.csv");
    let times = csv_column(&traj, "t");
    let site1 = csv_column(&traj, "rho_11");
    // populations follow cos^2(t): period pi
    for (t, p) in times.iter().zip(&site1) {
        assert!((p - t.cos().powi(2)).abs() < 1e-5, "t={t}: {p}");
    }
    assert!((site1.last().unwrap() - 1.0).abs() < 1e-4, "returns after one period");
}

#[test]
fn zero_t_max_single_initial_row() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "frozen.cfg",
        "[chain]\nn_sites = 6\ncoupling = nearest_neighbor\n\n[initial]\ntheta = 0.7\n\n[propagation]\nt_max = 0.0\n",
    );
    let out = excichain(&["run", "--config", &cfg], tmp.path());
    assert!(out.status.success());
    let traj = read(tmp.path(), "trajectory.csv");
    assert_eq!(traj.lines().count(), 2, "header plus the t = 0 row");
    let mean = csv_column(&traj, "M");
    assert!((mean[0] - 3.5).abs() < 1e-12);
    let p_l = csv_column(&traj, "P_L");
    assert!((p_l[0] - 0.5).abs() < 1e-12);
}

#[test]
fn run_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "det.cfg",
        "[chain]\nn_sites = 12\ncoupling = power_law\ngamma = 0.2\n\n[initial]\ntheta = 1.1\n\n[propagation]\nt_max = 2.0\n",
    );
    let a = excichain(&["run", "--config", &cfg, "--out-dir", "a"], tmp.path());
    let b = excichain(&["run", "--config", &cfg, "--out-dir", "b"], tmp.path());
    assert!(a.status.success() && b.status.success());
    assert_eq!(read(tmp.path(), "a/trajectory.csv"), read(tmp.path(), "b/trajectory.csv"));
    assert_eq!(read(tmp.path(), "a/summary.csv"), read(tmp.path(), "b/summary.csv"));
    assert!(read(tmp.path(), "a/trajectory.csv").ends_with('\n'));
    assert!(!read(tmp.path(), "a/trajectory.csv").contains('\r'));
}

const SWEEP_BASE: &str = "
[chain]
n_sites = 20
coupling = nearest_neighbor

[initial]
theta = 1.5707963267948966

[propagation]
t_max = 3.0
";

#[test]
fn sweep_rows_follow_grid_order_and_parallelism_is_invisible() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "sweep.cfg",
        &format!("{SWEEP_BASE}\n[sweep]\nparameter = gamma\nvalues = 0.5, 0.0, 0.2\n"),
    );
    let serial = excichain(
        &["sweep", "--config", &cfg, "--jobs", "1", "--out-dir", "serial"],
        tmp.path(),
    );
    assert!(serial.status.success(), "{}", String::from_utf8_lossy(&serial.stderr));
    let parallel = excichain(
        &["sweep", "--config", &cfg, "--jobs", "3", "--out-dir", "parallel"],
        tmp.path(),
    );
    assert!(parallel.status.success());

    let serial_csv = read(tmp.path(), "serial/sweep.csv");
    assert_eq!(serial_csv, read(tmp.path(), "parallel/sweep.csv"));
    // rows keep the order the grid was given in
    let values = csv_column(&serial_csv, "value");
    assert_eq!(values, vec![0.5, 0.0, 0.2]);
}

#[test]
fn failing_sweep_point_fails_after_all_points() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "partial.cfg",
        &format!("{SWEEP_BASE}\n[sweep]\nparameter = gamma\nvalues = 0.1, -0.5, 0.2\n"),
    );
    let out = excichain(&["sweep", "--config", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("sweep point -0.5"), "stderr: {stderr}");
    assert!(stderr.contains("nonnegative"), "stderr: {stderr}");
    assert!(!tmp.path().join("sweep.csv").exists(), "no file on failure");
}

#[test]
fn single_point_sweep_matches_run_summary() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "single.cfg",
        &format!("{SWEEP_BASE}\n[sweep]\nparameter = theta\nvalues = 0.9\n"),
    );
    let sweep = excichain(&["sweep", "--config", &cfg], tmp.path());
    assert!(sweep.status.success());

    let run_cfg = write(
        tmp.path(),
        "single_run.cfg",
        &SWEEP_BASE.replace("theta = 1.5707963267948966", "theta = 0.9"),
    );
    let run = excichain(&["run", "--config", &run_cfg], tmp.path());
    assert!(run.status.success());

    let sweep_csv = read(tmp.path(), "sweep.csv");
    let summary_csv = read(tmp.path(), "summary.csv");
    assert_eq!(
        csv_column(&sweep_csv, "P_L")[0],
        csv_column(&summary_csv, "P_L")[0],
        "sweep and run disagree on P_L"
    );
    assert_eq!(csv_column(&sweep_csv, "M")[0], csv_column(&summary_csv, "M")[0]);
}

#[test]
fn config_errors_exit_2_with_diagnostics() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "broken.cfg",
        "[chain]\nn_sites = 10\ncoupling = nearest_neighbor\nstrengh = 1.0\n\n[propagation]\nt_max = 1.0\n",
    );
    let out = excichain(&["run", "--config", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 4"), "stderr: {stderr}");
    assert!(stderr.contains("chain.strengh"), "stderr: {stderr}");

    let missing = excichain(&["run", "--config", "nope.cfg"], tmp.path());
    assert_eq!(missing.status.code(), Some(2));

    let no_input = excichain(&["run"], tmp.path());
    assert_eq!(no_input.status.code(), Some(2));
}

#[test]
fn stability_guard_rejects_oversized_step() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "unstable.cfg",
        "[chain]\nn_sites = 10\ncoupling = nearest_neighbor\n\n[propagation]\nt_max = 1.0\ndt = 0.2\n",
    );
    let out = excichain(&["run", "--config", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("stability guard"));
}

#[test]
fn analytic_report_values() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "analytic.cfg",
        "[chain]\nn_sites = 60\ncoupling = nearest_neighbor\ngamma = 0.3\n\n[initial]\ntheta = 1.5707963267948966\n\n[propagation]\nt_max = 12.0\n",
    );
    let out = excichain(
        &["analytic", "--config", &cfg, "--mean-at", "0,5", "--csv", "k_table.csv"],
        tmp.path(),
    );
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("p_k_positive_limit = 8.18309886183791e-1"), "{stdout}");
    assert!(stdout.contains("long_time_mean = 2.71666666666667e1"), "{stdout}");
    assert!(stdout.contains("mean_at t=0 -> 3.05000000000000e1"), "{stdout}");

    let table = read(tmp.path(), "k_table.csv");
    let p_k = csv_column(&table.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n"), "P_k");
    assert_eq!(p_k.len(), 60);
    let total: f64 = p_k.iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn analytic_warns_on_odd_chain() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "odd.cfg",
        "[chain]\nn_sites = 7\ncoupling = nearest_neighbor\n\n[propagation]\nt_max = 1.0\n",
    );
    let out = excichain(&["analytic", "--config", &cfg], tmp.path());
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("k-space fields omitted"), "{stderr}");
    assert!(stdout.contains("phi0 ="), "mean fields still emitted: {stdout}");
    assert!(!stdout.contains("p_k_positive ="), "{stdout}");
}

#[test]
fn couplings_dump_round_trips_into_custom_run() {
    let tmp = TempDir::new().unwrap();
    let dump = excichain(
        &["couplings", "--model", "focusing", "--n-sites", "8", "--peak", "0.9", "--out", "profile.txt"],
        tmp.path(),
    );
    assert!(dump.status.success());
    let profile = read(tmp.path(), "profile.txt");
    let bonds: Vec<f64> = profile.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(bonds.len(), 7);
    let max = bonds.iter().cloned().fold(0.0_f64, f64::max);
    assert!((max - 0.9).abs() < 1e-12);
    let reversed: Vec<f64> = bonds.iter().rev().cloned().collect();
    assert_eq!(bonds, reversed);

    let cfg = write(
        tmp.path(),
        "custom.cfg",
        "[chain]\nn_sites = 8\ncoupling = custom\nprofile_file = profile.txt\n\n[initial]\ntheta = -1.5707963267948966\n\n[propagation]\nt_max = 3.0\n",
    );
    let run = excichain(&["run", "--config", &cfg], tmp.path());
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let summary = read(tmp.path(), "summary.csv");
    // no single coupling scale: V-dependent analytic columns are NaN
    assert!(summary.lines().nth(1).unwrap().contains("NaN"));
}

#[test]
fn preset_fig1a_reproduces_directional_transport() {
    let tmp = TempDir::new().unwrap();
    let out = excichain(&["run", "--preset", "fig1a"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = read(tmp.path(), "fig1a_summary.csv");
    let p_left = csv_column(&summary, "P_L")[0];
    assert!((0.80..=0.84).contains(&p_left), "fig1a P_L = {p_left}");

    let mismatch = excichain(&["sweep", "--preset", "fig1a"], tmp.path());
    assert_eq!(mismatch.status.code(), Some(2));
    let mismatch = excichain(&["run", "--preset", "fig2"], tmp.path());
    assert_eq!(mismatch.status.code(), Some(2));
}
