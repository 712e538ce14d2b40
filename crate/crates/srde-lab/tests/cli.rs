//! End-to-end tests of the command-line surface: exit codes, file formats,
//! resumability, and worker-count determinism.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_srde-lab"))
}

fn write_cfg(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("run.cfg");
    std::fs::write(&path, body).unwrap();
    path
}

const TINY: &str = "\
num_modes = 8
dt = 1e-3
horizon = 0.05
trials = 4
betas = 3,6
gammas = 1.2,2
";

#[test]
fn check_reports_json_and_exit_codes() {
    let out = bin().arg("check").output().unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["report"]["eta"], serde_json::json!(0.6));
    assert!(doc["version"].as_str().unwrap().starts_with("srde-lab"));

    // default beta = 3, gamma = 1.5 sits above the threshold 1.4: strict fails
    let out = bin().args(["check", "--strict"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));

    // gamma = 1.2 < 1.4 passes strictly
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "gamma = 1.2\n");
    let out = bin()
        .args(["--config", cfg.to_str().unwrap(), "check", "--strict"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn config_errors_exit_2_and_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "definitely_not_a_key = 1\n");
    let out = bin()
        .args(["--config", cfg.to_str().unwrap(), "check"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("definitely_not_a_key"), "{stderr}");

    let cfg = write_cfg(dir.path(), "beta = soon\n");
    let out = bin()
        .args(["--config", cfg.to_str().unwrap(), "check"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("beta") && stderr.contains("real > 1"), "{stderr}");
}

#[test]
fn missing_config_exits_4() {
    let out = bin()
        .args(["--config", "/definitely/not/here.cfg", "check"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn ode_table_has_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["--out", dir.path().to_str().unwrap(), "ode", "--t-max", "2", "--points", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("ode_table.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,exact_solution,decay_envelope,uniform_bound");
    assert_eq!(lines.len(), 6);
    // closed form at t = 0: phi0 and 1.5 phi0
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "0");
    assert_eq!(first[1], "5");
    assert_eq!(first[2], "7.5");
}

#[test]
fn sde_trials_csv_is_appendable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "dt = 1e-2\nhorizon = 0.1\n");
    let run = || {
        let out = bin()
            .args([
                "--config",
                cfg.to_str().unwrap(),
                "--out",
                dir.path().to_str().unwrap(),
                "sde",
                "--trials",
                "100",
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    };
    run();
    run();
    let text = std::fs::read_to_string(dir.path().join("sde_trials.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "trial,seed,exit_time,exit_reason,final_norm_sq");
    assert_eq!(lines.len(), 1 + 200, "two runs of 100 trials each append");
}

#[test]
fn simulate_emits_series_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "num_modes = 8\ndt = 1e-3\nhorizon = 0.02\n");
    let out = bin()
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
            "simulate",
            "--trials",
            "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("trajectory_0.csv")).unwrap();
    assert!(text.starts_with("t,sup_norm,level_index\n"));
    assert!(dir.path().join("trajectory_1.csv").exists());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("simulate_summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["trajectories"].as_array().unwrap().len(), 2);
    assert!(summary["config_digest"].as_str().unwrap().len() == 16);
}

#[test]
fn sweep_resumes_and_is_worker_independent() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir_a.path(), TINY);

    let sweep = |out_dir: &Path, workers: &str| {
        let out = bin()
            .args([
                "--config",
                cfg.to_str().unwrap(),
                "--seed",
                "11",
                "--workers",
                workers,
                "--out",
                out_dir.to_str().unwrap(),
                "sweep",
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    };
    sweep(dir_a.path(), "1");
    sweep(dir_b.path(), "4");
    let a = std::fs::read_to_string(dir_a.path().join("results.csv")).unwrap();
    let b = std::fs::read_to_string(dir_b.path().join("results.csv")).unwrap();
    assert_eq!(a, b, "results.csv must not depend on the worker count");
    assert!(a.starts_with("beta,gamma,trials,explosions,wilson_lo,wilson_hi,mean_blowup_time,below_ito,below_theorem,below_combined\n"));
    assert_eq!(a.lines().count(), 5, "header + 4 cells");

    // truncate to simulate an interruption after one cell, then resume
    let truncated: Vec<&str> = a.lines().take(2).collect();
    std::fs::write(dir_a.path().join("results.csv"), truncated.join("\n") + "\n").unwrap();
    sweep(dir_a.path(), "2");
    let resumed = std::fs::read_to_string(dir_a.path().join("results.csv")).unwrap();
    assert_eq!(a, resumed, "resume must reproduce the identical map");

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir_a.path().join("sweep_summary.json")).unwrap())
            .unwrap();
    assert!(summary["results_digest"].as_str().unwrap().len() == 16);
    assert_eq!(summary["eta"], serde_json::json!(0.6));
}

#[test]
fn workers_env_var_is_honored_and_equivalent() {
    let dir_flag = tempfile::tempdir().unwrap();
    let dir_env = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir_flag.path(), TINY);
    let out = bin()
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            "9",
            "--workers",
            "2",
            "--out",
            dir_flag.path().to_str().unwrap(),
            "sweep",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin()
        .env("SRDE_WORKERS", "3")
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            "9",
            "--out",
            dir_env.path().to_str().unwrap(),
            "sweep",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let a = std::fs::read_to_string(dir_flag.path().join("results.csv")).unwrap();
    let b = std::fs::read_to_string(dir_env.path().join("results.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn convolution_emits_report_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "num_modes = 8\ndt = 2e-3\nhorizon = 0.2\nlambda = power_law\nrho = 2\ntheta = 1\nalpha = 0.3\nzeta = 0.4\np_moment = 12\n",
    );
    let out = bin()
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
            "convolution",
            "--trials",
            "100",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("convolution_report.csv")).unwrap();
    assert!(text.starts_with("t,lhs,rhs,ratio\n"));
    assert_eq!(text.lines().count(), 1 + 100 + 1, "header + steps + t = 0 row");
    let fit: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("convolution_fit.json")).unwrap())
            .unwrap();
    let err = fit["factorization_relative_linf_error"].as_f64().unwrap();
    assert!(err > 0.0 && err < 0.05, "factorization error {err}");
}

#[test]
fn lambda_csv_is_loaded_relative_to_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("spectrum.csv"), "1,1.0\n2,0.5\n3,0.25\n4,0.125\n").unwrap();
    let cfg = write_cfg(
        dir.path(),
        "lambda = csv\nlambda_csv = spectrum.csv\nrho = 2\ntheta = 0.8\nnum_modes = 8\n",
    );
    let out = bin()
        .args(["--config", cfg.to_str().unwrap(), "check"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["report"]["eta"], serde_json::json!(0.0));
}
