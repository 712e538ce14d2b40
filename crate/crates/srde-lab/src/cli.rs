//! Command-line surface.
//!
//! Subcommands: `check` (assumption report as JSON), `ode` (decay-oracle
//! tables), `sde` (finite-dimensional Monte Carlo), `simulate` (field
//! trajectories), `sweep` (explosion-probability maps), `convolution`
//! (factorization and moment-bound reports). Global flags `--config`,
//! `--seed`, `--workers` (or `SRDE_WORKERS`), `--out`.
//!
//! Exit codes: 0 success, 2 configuration error, 3 assumption-check
//! failure under `--strict`, 4 i/o error.

use crate::assumptions::check_assumptions;
use crate::config::RunConfig;
use crate::convolution::{
    factorization_reconstruct, moment_bound_check, sample_noise_increments,
    stochastic_convolution_direct, sup_moment_scaling, z_alpha_path,
};
use crate::error::{Error, Result};
use crate::harness::{run_sweep, SweepSpec};
use crate::ode;
use crate::rng::trial_seed;
use crate::sde::{moment_estimate, simulate_sde_path};
use crate::spde::simulate_spde;
use clap::{Parser, Subcommand};
use serde_json::json;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ASSUMPTIONS: i32 = 3;
pub const EXIT_IO: i32 = 4;

fn version_string() -> String {
    format!("srde-lab {}", env!("CARGO_PKG_VERSION"))
}

#[derive(Parser, Debug)]
#[command(name = "srde-lab", version, about = "Simulation laboratory for stochastic reaction-diffusion equations with dissipative drift and super-linear multiplicative noise")]
struct Cli {
    /// Flat key = value configuration file (every key has a default)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed; every Monte Carlo stream derives from it
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads (default: all cores; SRDE_WORKERS is honored)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output directory for CSV/JSON artifacts
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the standing assumptions; prints the report as JSON
    Check {
        /// Exit with code 3 when any check fails
        #[arg(long)]
        strict: bool,
        /// Number of series terms for the summability diagnostics
        #[arg(long, default_value_t = 10_000)]
        tail_terms: usize,
    },
    /// Tabulate the exact dissipative-ODE solution and its envelopes
    Ode {
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Monte Carlo exit-time experiments for the comparison SDE
    Sde {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Run field trajectories; emits per-trajectory series CSVs
    Simulate {
        #[arg(long, default_value_t = 1)]
        trials: usize,
    },
    /// Fill the (beta, gamma) explosion map; resumable by cell
    Sweep,
    /// Stochastic-convolution reports: factorization error, moment ratios
    Convolution {
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => EXIT_IO,
                _ => EXIT_CONFIG,
            }
        }
    }
}

fn init_workers(cli_workers: Option<usize>) {
    let workers = cli_workers.or_else(|| {
        std::env::var("SRDE_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(w) = workers {
        if w > 0 {
            // ignore the error when a pool already exists (tests)
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build_global();
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    init_workers(cli.workers);
    let base_dir = cli
        .config
        .as_ref()
        .and_then(|p| p.parent().map(Path::to_path_buf));
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    std::fs::create_dir_all(&cli.out)?;

    match cli.command {
        Command::Check { strict, tail_terms } => {
            let basis = cfg.build_basis()?;
            let spectrum = cfg.build_spectrum(base_dir.as_deref())?;
            let model = cfg.build_model()?;
            let report = check_assumptions(&basis, &spectrum, &model, tail_terms)?;
            let doc = json!({
                "version": version_string(),
                "config_digest": format!("{:016x}", cfg.digest()),
                "report": report,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            if strict && !report.all_ok() {
                return Ok(EXIT_ASSUMPTIONS);
            }
            Ok(EXIT_OK)
        }
        Command::Ode { t_max, points } => {
            if points < 2 || !(t_max > 0.0) {
                return Err(Error::invalid("need t_max > 0 and at least 2 points"));
            }
            let phi0 = cfg.u0_amplitude;
            let path = cli.out.join("ode_table.csv");
            let mut f = std::fs::File::create(&path)?;
            writeln!(f, "t,exact_solution,decay_envelope,uniform_bound")?;
            for i in 0..points {
                let t = t_max * i as f64 / (points - 1) as f64;
                let exact = ode::exact_solution(phi0, cfg.beta, t)?;
                let env = ode::decay_envelope(phi0.abs(), cfg.beta, cfg.k1, t)?;
                let ub = if t > 0.0 {
                    ode::uniform_bound(cfg.beta, cfg.k1, t)?
                } else {
                    f64::INFINITY
                };
                writeln!(f, "{t},{exact},{env},{ub}")?;
            }
            println!("wrote {}", path.display());
            Ok(EXIT_OK)
        }
        Command::Sde { trials } => {
            let sde_cfg = cfg.build_sde()?;
            let path = cli.out.join("sde_trials.csv");
            let fresh = !path.exists();
            let mut f = std::fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(&path)?;
            if fresh {
                writeln!(f, "trial,seed,exit_time,exit_reason,final_norm_sq")?;
            }
            for i in 0..trials as u64 {
                let seed = trial_seed(cli.seed, i);
                let p = simulate_sde_path(&sde_cfg, seed)?;
                writeln!(
                    f,
                    "{i},{seed},{},{},{}",
                    p.exit_time, p.exit_reason, p.final_norm_sq
                )?;
            }
            let est = moment_estimate(&sde_cfg, trials.max(100), cli.seed)?;
            let doc = json!({
                "version": version_string(),
                "config_digest": format!("{:016x}", cfg.digest()),
                "ito_condition_holds": crate::sde::ito_condition(cfg.beta, cfg.gamma),
                "moment_estimate": est,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            Ok(EXIT_OK)
        }
        Command::Simulate { trials } => {
            let basis = cfg.build_basis()?;
            let spectrum = cfg.build_spectrum(base_dir.as_deref())?;
            let model = cfg.build_model()?;
            let solver = cfg.build_solver()?;
            let u0 = cfg.build_u0(&basis);
            let mut summaries = Vec::new();
            let mut records = Vec::new();
            for i in 0..trials as u64 {
                let seed = trial_seed(cli.seed, i);
                let rec = simulate_spde(&u0, &model, &spectrum, &basis, &solver, seed)?;
                let path = cli.out.join(format!("trajectory_{i}.csv"));
                let mut f = std::fs::File::create(&path)?;
                writeln!(f, "t,sup_norm,level_index")?;
                for p in &rec.series {
                    writeln!(f, "{},{},{}", p.t, p.sup_norm, p.level_index)?;
                }
                summaries.push(json!({
                    "trial": i,
                    "seed": seed,
                    "verdict": rec.verdict,
                    "record_digest": format!("{:016x}", rec.digest()),
                    "crossings": rec.crossings.len(),
                    "wall_secs": rec.wall_secs,
                    "series_csv": path.display().to_string(),
                }));
                records.push(rec);
            }
            // tail exponent of the tripling waiting times, when the run
            // produced enough ladder activity (estimated, never asserted)
            let tail = crate::harness::tripling_time_tail_exponent(&records).ok();
            let doc = json!({
                "version": version_string(),
                "config_digest": format!("{:016x}", cfg.digest()),
                "tripling_tail": tail,
                "trajectories": summaries,
            });
            let spath = cli.out.join("simulate_summary.json");
            std::fs::write(&spath, serde_json::to_string_pretty(&doc).expect("serializable"))?;
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            Ok(EXIT_OK)
        }
        Command::Sweep => {
            let basis = cfg.build_basis()?;
            let spectrum = cfg.build_spectrum(base_dir.as_deref())?;
            let model = cfg.build_model()?;
            let solver = cfg.build_solver()?;
            let u0 = cfg.build_u0(&basis);
            let spec = SweepSpec {
                betas: cfg.betas.clone(),
                gammas: cfg.gammas.clone(),
                trials_per_cell: cfg.trials,
                model_template: model,
                solver,
                spectrum,
                basis,
                u0,
                master_seed: cli.seed,
            };
            let results_path = cli.out.join("results.csv");
            let map = run_sweep(&spec, Some(&results_path))?;
            let doc = json!({
                "version": version_string(),
                "config_digest": format!("{:016x}", cfg.digest()),
                "results_digest": format!("{:016x}", map.digest()),
                "eta": map.eta,
                "cells": map.cells,
                "results_csv": results_path.display().to_string(),
            });
            let spath = cli.out.join("sweep_summary.json");
            std::fs::write(&spath, serde_json::to_string_pretty(&doc).expect("serializable"))?;
            println!(
                "sweep complete: {} cells, results digest {:016x}, wrote {}",
                map.cells.len(),
                map.digest(),
                results_path.display()
            );
            Ok(EXIT_OK)
        }
        Command::Convolution { trials } => {
            let basis = cfg.build_basis()?;
            let spectrum = cfg.build_spectrum(base_dir.as_deref())?;
            let model = cfg.build_model()?;
            let conv = cfg.build_convolution()?;
            let eta = spectrum.compute_eta()?;
            conv.validate_embedding(eta)?;

            // moment-bound ratio report, driven by the decay envelope
            let sup_path: Vec<f64> = (0..conv.steps)
                .map(|m| {
                    ode::decay_envelope(
                        cfg.u0_amplitude.abs().max(model.c0),
                        model.beta,
                        model.k1,
                        m as f64 * conv.dt,
                    )
                    .expect("valid parameters")
                })
                .collect();
            let report = moment_bound_check(
                &conv, &model, &spectrum, &basis, &sup_path, trials.max(100), cli.seed,
            )?;
            let rpath = cli.out.join("convolution_report.csv");
            let mut f = std::fs::File::create(&rpath)?;
            writeln!(f, "t,lhs,rhs,ratio")?;
            for p in &report.points {
                writeln!(f, "{},{},{},{}", p.t, p.lhs, p.rhs, p.ratio)?;
            }

            // factorization self-consistency on a shared realization
            let sigma_one: Vec<Vec<f64>> = vec![vec![1.0; basis.grid_size()]; conv.steps];
            let noise = sample_noise_increments(
                &spectrum,
                &basis,
                basis.num_modes(),
                conv.dt,
                conv.steps,
                cli.seed,
            )?;
            let direct = stochastic_convolution_direct(&sigma_one, &basis, &noise)?;
            let za = z_alpha_path(&sigma_one, &basis, &spectrum, conv.alpha, &noise, None)?;
            let rec = factorization_reconstruct(&za, &basis, conv.alpha, conv.dt)?;
            let scale = direct
                .iter()
                .flatten()
                .fold(0.0f64, |a, &v| a.max(v.abs()));
            let max_err = direct
                .iter()
                .zip(&rec)
                .flat_map(|(d, r)| d.iter().zip(r).map(|(a, b)| (a - b).abs()))
                .fold(0.0f64, f64::max);

            // sup-moment scaling over a geometric horizon ladder
            let horizons: Vec<f64> = (0..4)
                .map(|i| conv.dt * conv.steps as f64 / 2f64.powi(3 - i))
                .collect();
            let fit = sup_moment_scaling(&conv, &spectrum, &basis, trials.max(50), &horizons, cli.seed)?;

            let doc = json!({
                "version": version_string(),
                "config_digest": format!("{:016x}", cfg.digest()),
                "factorization_relative_linf_error": max_err / scale,
                "moment_ratio_max": report.max_ratio(),
                "sup_moment_fit": fit,
                "report_csv": rpath.display().to_string(),
            });
            let fpath = cli.out.join("convolution_fit.json");
            std::fs::write(&fpath, serde_json::to_string_pretty(&doc).expect("serializable"))?;
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            Ok(EXIT_OK)
        }
    }
}
