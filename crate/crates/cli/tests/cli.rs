//! End-to-end checks of the binary: exit codes, file outputs, and
//! byte-identical replay.

use std::path::Path;
use std::process::{Command, Output};

fn lagns(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lagns"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const SMALL_RUN: &str = "\
problem.kind = cauchy
problem.length = 24
grid.n_cells = 120
gas.beta = 1.5
init.profile = gaussian-bump
init.field = theta
init.amplitude = 0.4
init.width = 1
run.t_end = 2
";

#[test]
fn version_prints_and_succeeds() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lagns(&["version"], tmp.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("lagns "), "{text}");
}

#[test]
fn unknown_subcommand_exits_with_usage() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lagns(&["frobnicate"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stderr).unwrap();
    assert!(text.to_lowercase().contains("usage"), "{text}");
}

#[test]
fn equilibrium_run_succeeds_with_zero_deviation() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "eq.cfg",
        "problem.length = 8\ngrid.n_cells = 16\nrun.t_end = 0.5\n",
    );
    let out = lagns(&["run", "eq.cfg", "--out", "res", "--seedless"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("seedless: ok"), "{stdout}");

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("res/summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["completed"], true);
    assert_eq!(summary["positivity_ok"], true);
    assert_eq!(summary["energy_inequality_ok"], true);
    assert!(summary["final_linf_dev"].as_f64().unwrap() < 1e-12);

    let csv = std::fs::read_to_string(tmp.path().join("res/diagnostics.csv")).unwrap();
    assert!(csv.starts_with(
        "t,E,V,cumV,inf_v,sup_v,inf_theta,sup_theta,L2_dev,Linf_dev,L2_grad,sigma_N,log_Y_N"
    ));
    let snap = std::fs::read_to_string(tmp.path().join("res/snapshot_t0.csv")).unwrap();
    assert!(snap.starts_with("x,v,u,theta"));
    assert_eq!(snap.lines().count(), 17);
}

#[test]
fn perturbed_run_is_replayed_byte_identically() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "run.cfg", SMALL_RUN);
    for out_dir in ["a", "b"] {
        let out = lagns(&["run", "run.cfg", "--out", out_dir], tmp.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for file in ["diagnostics.csv", "summary.json", "snapshot_final.csv", "snapshot_t1.csv"] {
        let a = std::fs::read(tmp.path().join("a").join(file)).unwrap();
        let b = std::fs::read(tmp.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between replays");
    }
    // Snapshots follow the doubling schedule.
    for snap in ["snapshot_t0.csv", "snapshot_t1.csv", "snapshot_t2.csv", "snapshot_final.csv"] {
        assert!(tmp.path().join("a").join(snap).exists(), "{snap} missing");
    }
    assert!(!tmp.path().join("a/snapshot_t4.csv").exists());
}

#[test]
fn cadence_flag_thins_the_stream() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "run.cfg", SMALL_RUN);
    let out = lagns(
        &["run", "run.cfg", "--out", "thin", "--cadence", "10"],
        tmp.path(),
    );
    assert!(out.status.success());
    let full = lagns(&["run", "run.cfg", "--out", "full"], tmp.path());
    assert!(full.status.success());
    let thin_rows = std::fs::read_to_string(tmp.path().join("thin/diagnostics.csv"))
        .unwrap()
        .lines()
        .count();
    let full_rows = std::fs::read_to_string(tmp.path().join("full/diagnostics.csv"))
        .unwrap()
        .lines()
        .count();
    assert!(thin_rows < full_rows / 5, "thin {thin_rows} vs full {full_rows}");
}

#[test]
fn bad_config_fails_with_machine_readable_error() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "bad.cfg", "gas.beta = 0\n");
    let out = lagns(&["run", "bad.cfg"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: "), "{err}");
    assert!(err.contains("gas.beta"), "{err}");

    write(tmp.path(), "typo.cfg", "grid.cells = 40\n");
    let out = lagns(&["run", "typo.cfg"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unknown key"), "{err}");
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn incompatible_profile_fails_cleanly() {
    let tmp = tempfile::tempdir().unwrap();
    // Bump too wide for the window: the far-field check rejects it.
    write(
        tmp.path(),
        "wide.cfg",
        "problem.length = 8\ngrid.n_cells = 32\ninit.profile = gaussian-bump\n\
         init.width = 4\nrun.t_end = 1\n",
    );
    let out = lagns(&["run", "wide.cfg", "--out", "w"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: "), "{err}");
    assert!(err.contains("far-field"), "{err}");
    assert!(!tmp.path().join("w/snapshot_final.csv").exists());
}

#[test]
fn step_failure_mid_run_flushes_partial_output() {
    let tmp = tempfile::tempdir().unwrap();
    // The floor sits above the initial minimum temperature, so the first
    // step attempt rejects forever and dt underflows.
    write(
        tmp.path(),
        "floor.cfg",
        "problem.length = 20\ngrid.n_cells = 100\ninit.profile = cold-spot\n\
         init.theta_min = 0.1\nscheme.positivity_floor = 0.5\nscheme.dt_min = 1e-6\n\
         run.t_end = 1\n",
    );
    let out = lagns(&["run", "floor.cfg", "--out", "f"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("dt"), "{err}");
    // The initial observation and final snapshot of the last valid state
    // were still written, and the summary records the incomplete run.
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(tmp.path().join("f/summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["completed"], false);
    assert!(tmp.path().join("f/snapshot_final.csv").exists());
}

#[test]
fn verify_truncation_reports_monotone_decrease() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "trunc.cfg",
        "init.profile = gaussian-bump\ninit.amplitude = 0.4\n\
         verify.lengths = 12,24,48\nverify.dx = 0.25\nverify.truncation_t_end = 20\n",
    );
    let out = lagns(
        &["verify", "truncation", "trunc.cfg", "--out", "t"],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = std::fs::read_to_string(tmp.path().join("t/truncation.csv")).unwrap();
    assert!(table.starts_with("L,discrepancy"));
    assert_eq!(table.lines().count(), 3);
}

#[test]
fn verify_convergence_meets_order_thresholds() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "conv.cfg",
        "verify.levels = 3\nverify.spatial_base_cells = 32\nverify.spatial_base_dt = 2e-5\n\
         verify.spatial_t_end = 0.05\nverify.temporal_levels = 3\nverify.temporal_cells = 96\n\
         verify.temporal_base_dt = 2e-3\nverify.temporal_t_end = 0.06\n",
    );
    let out = lagns(&["verify", "convergence", "conv.cfg", "--out", "c"], tmp.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}");
    assert!(stdout.contains("PASS"), "{stdout}");
    for file in ["convergence_spatial.csv", "convergence_temporal.csv"] {
        let table = std::fs::read_to_string(tmp.path().join("c").join(file)).unwrap();
        assert!(table.starts_with("level,dx,dt,error,order"), "{file}");
        assert_eq!(table.lines().count(), 4, "{file}");
    }
}

#[test]
#[ignore = "runs the full acceptance suite (about a minute); same criteria as lagns-core tests/acceptance.rs"]
fn accept_passes_on_a_correct_build() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lagns(&["accept", "--out", "acc"], tmp.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}");
    assert!(stdout.contains("all criteria PASS"), "{stdout}");
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(tmp.path().join("acc/acceptance.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["all_passed"], true);
}

#[test]
fn verify_oracle_passes_on_small_case() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "oracle.cfg",
        "problem.length = 10\ngrid.n_cells = 64\n\
         init.profile = gaussian-bump\ninit.amplitude = 0.5\n\
         verify.oracle_dt = 2.5e-4\nverify.oracle_ratio = 100\nverify.oracle_t_end = 0.02\n\
         verify.oracle_tolerance = 1e-4\n",
    );
    let out = lagns(&["verify", "oracle", "oracle.cfg", "--out", "o"], tmp.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}");
    assert!(stdout.contains("PASS"), "{stdout}");
}
