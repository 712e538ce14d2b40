//! Monte Carlo explosion-probability estimation and (β, γ) frontier sweeps
//! against the analytic thresholds.
//!
//! Each sweep cell runs `trials` independent trajectories; the explosion
//! count gets a Wilson 95% interval (correct coverage at zero counts, which
//! dominate the non-explosive regime) and three strict threshold
//! classifications:
//!
//! * the finite-dimensional Itô line γ < (β+1)/2,
//! * the theorem line γ < 1 + (1−η)(β−1)/2 at the configured η,
//! * the combined line γ < max{3/2, (3+β)/4}.
//!
//! Boundary cells (γ exactly on a line) classify as `false` and carry a
//! boundary flag. Determinism: the cell seed is a pure function of the
//! master seed and the cell coordinates, each trial derives its stream from
//! the cell seed and the trial index, and aggregation is order-independent,
//! so results match across worker counts. Sweeps persist incrementally and
//! resume by cell.

use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::noise::NoiseSpectrum;
use crate::rng::{labeled_seed, trial_seed, StableHasher};
use crate::spde::{simulate_spde, SolverConfig, TrajectoryRecord};
use crate::spectral::SpectralBasis;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

/// z-score of the 97.5% normal quantile (95% two-sided coverage).
const Z95: f64 = 1.959963984540054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilsonInterval {
    pub lo: f64,
    pub hi: f64,
}

/// Wilson score interval for a binomial proportion at 95% confidence.
pub fn wilson_interval(successes: usize, trials: usize) -> WilsonInterval {
    assert!(trials > 0 && successes <= trials);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    WilsonInterval {
        // exact endpoints at the degenerate counts (the formula leaves
        // floating-point dust there)
        lo: if successes == 0 { 0.0 } else { (center - half).max(0.0) },
        hi: if successes == trials { 1.0 } else { (center + half).min(1.0) },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellClassification {
    pub below_ito: bool,
    pub below_theorem: bool,
    pub below_combined: bool,
    /// γ sits exactly on one of the three lines.
    pub boundary: bool,
}

/// Strict-inequality classification of a (β, γ) cell at the given η.
pub fn classify_cell(beta: f64, gamma: f64, eta: f64) -> CellClassification {
    let ito = (beta + 1.0) / 2.0;
    let theorem = 1.0 + (1.0 - eta) * (beta - 1.0) / 2.0;
    let combined = 1.5f64.max((3.0 + beta) / 4.0);
    CellClassification {
        below_ito: gamma < ito,
        below_theorem: gamma < theorem,
        below_combined: gamma < combined,
        boundary: gamma == ito || gamma == theorem || gamma == combined,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplosionEstimate {
    pub explosions: usize,
    pub trials: usize,
    pub interval: WilsonInterval,
    /// Mean time-to-explosion among exploded trajectories; `None` when no
    /// trajectory exploded.
    pub mean_blowup_time: Option<f64>,
}

/// Runs `trials` independent trajectories and tallies explosion verdicts
/// (threshold crossings and non-finite states alike). Deterministic given
/// the master seed and independent of worker count.
pub fn estimate_explosion_probability(
    model: &ModelSpec,
    spectrum: &NoiseSpectrum,
    basis: &SpectralBasis,
    config: &SolverConfig,
    u0: &[f64],
    trials: usize,
    master_seed: u64,
) -> Result<ExplosionEstimate> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    config.validate(model)?;
    let outcomes: Vec<Option<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let record = simulate_spde(u0, model, spectrum, basis, config, trial_seed(master_seed, i))
                .expect("config validated above");
            record.verdict.blowup_time()
        })
        .collect();
    let explosions = outcomes.iter().filter(|o| o.is_some()).count();
    let mean_blowup_time = if explosions > 0 {
        Some(outcomes.iter().flatten().sum::<f64>() / explosions as f64)
    } else {
        None
    };
    Ok(ExplosionEstimate {
        explosions,
        trials,
        interval: wilson_interval(explosions, trials),
        mean_blowup_time,
    })
}

/// Log-log tail fit of the tripling waiting times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriplingTailFit {
    /// Fitted exponent q of P(waiting time < ε) ~ C·ε^q in the lower tail.
    pub exponent: f64,
    /// 95% half-width from the regression residuals (report-only; no
    /// specific q is asserted anywhere).
    pub ci_half_width: f64,
    pub gap_count: usize,
}

/// Estimates the small-ε tail exponent of the up-crossing waiting times
/// collected across trajectory records: the probability that the sup-norm
/// triples within a short time should vanish polynomially, and this fits
/// that polynomial order from the empirical distribution function over the
/// lower tail (5th to 50th percentile of the positive gaps).
pub fn tripling_time_tail_exponent(records: &[TrajectoryRecord]) -> Result<TriplingTailFit> {
    let mut gaps: Vec<f64> = Vec::new();
    for record in records {
        for pair in record.crossings.windows(2) {
            if pair[1].direction == crate::ladder::CrossingDirection::Up {
                let gap = pair[1].time - pair[0].time;
                if gap > 0.0 {
                    gaps.push(gap);
                }
            }
        }
    }
    if gaps.len() < 20 {
        return Err(Error::invalid(format!(
            "need at least 20 positive up-move waiting times, got {}",
            gaps.len()
        )));
    }
    gaps.sort_unstable_by(f64::total_cmp);
    let n = gaps.len();
    let lo = (n / 20).max(1);
    let hi = n / 2;
    let mut log_eps = Vec::with_capacity(hi - lo);
    let mut log_cdf = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        // skip ties so each epsilon appears once with its final CDF value
        if i + 1 < n && gaps[i + 1] == gaps[i] {
            continue;
        }
        log_eps.push(gaps[i].ln());
        log_cdf.push(((i + 1) as f64 / n as f64).ln());
    }
    if log_eps.len() < 5 {
        return Err(Error::invalid(
            "too few distinct waiting times in the lower tail for a fit",
        ));
    }
    let m = log_eps.len() as f64;
    let mx = log_eps.iter().sum::<f64>() / m;
    let my = log_cdf.iter().sum::<f64>() / m;
    let sxx: f64 = log_eps.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = log_eps
        .iter()
        .zip(&log_cdf)
        .map(|(a, b)| (a - mx) * (b - my))
        .sum();
    let slope = sxy / sxx;
    let ss_res: f64 = log_eps
        .iter()
        .zip(&log_cdf)
        .map(|(a, b)| {
            let r = (b - my) - slope * (a - mx);
            r * r
        })
        .sum();
    let se = (ss_res / (m - 2.0).max(1.0) / sxx).sqrt();
    Ok(TriplingTailFit {
        exponent: slope,
        ci_half_width: 1.96 * se,
        gap_count: n,
    })
}

/// A full frontier sweep: the (β, γ) grid, the per-cell trial budget, and
/// the shared solver/model/noise template.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub betas: Vec<f64>,
    pub gammas: Vec<f64>,
    pub trials_per_cell: usize,
    pub model_template: ModelSpec,
    pub solver: SolverConfig,
    pub spectrum: NoiseSpectrum,
    pub basis: SpectralBasis,
    pub u0: Vec<f64>,
    pub master_seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.betas.is_empty() || self.gammas.is_empty() {
            return Err(Error::invalid("beta and gamma grids must be nonempty"));
        }
        if self.betas.windows(2).any(|w| w[1] <= w[0])
            || self.gammas.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::invalid("beta and gamma grids must be sorted and distinct"));
        }
        if self.trials_per_cell == 0 {
            return Err(Error::invalid("trials_per_cell must be at least 1"));
        }
        if self.betas.iter().any(|&b| !(b > 1.0)) {
            return Err(Error::invalid("all beta values must exceed 1"));
        }
        Ok(())
    }

    /// Cells in row-major order (β outer, γ inner).
    pub fn cells(&self) -> Vec<(f64, f64)> {
        self.betas
            .iter()
            .flat_map(|&b| self.gammas.iter().map(move |&g| (b, g)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub beta: f64,
    pub gamma: f64,
    pub trials: usize,
    pub explosions: usize,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub mean_blowup_time: Option<f64>,
    pub below_ito: bool,
    pub below_theorem: bool,
    pub below_combined: bool,
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ExplosionMap {
    pub eta: f64,
    pub cells: Vec<CellResult>,
}

pub const RESULTS_CSV_HEADER: &str = "beta,gamma,trials,explosions,wilson_lo,wilson_hi,mean_blowup_time,below_ito,below_theorem,below_combined";

impl ExplosionMap {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(RESULTS_CSV_HEADER);
        out.push('\n');
        for c in &self.cells {
            out.push_str(&Self::csv_row(c));
            out.push('\n');
        }
        out
    }

    fn csv_row(c: &CellResult) -> String {
        let mbt = c.mean_blowup_time.map_or(String::new(), |t| format!("{t}"));
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            c.beta,
            c.gamma,
            c.trials,
            c.explosions,
            c.wilson_lo,
            c.wilson_hi,
            mbt,
            c.below_ito,
            c.below_theorem,
            c.below_combined
        )
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or("");
        if header.trim() != RESULTS_CSV_HEADER {
            return Err(Error::invalid(format!(
                "unexpected results header `{header}`"
            )));
        }
        let mut cells = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 10 {
                return Err(Error::invalid(format!(
                    "row {} has {} fields, expected 10",
                    i + 2,
                    f.len()
                )));
            }
            let parse_f64 = |s: &str, what: &str| -> Result<f64> {
                s.parse()
                    .map_err(|_| Error::invalid(format!("bad {what} `{s}` on row {}", i + 2)))
            };
            let parse_usize = |s: &str, what: &str| -> Result<usize> {
                s.parse()
                    .map_err(|_| Error::invalid(format!("bad {what} `{s}` on row {}", i + 2)))
            };
            let parse_bool = |s: &str, what: &str| -> Result<bool> {
                s.parse()
                    .map_err(|_| Error::invalid(format!("bad {what} `{s}` on row {}", i + 2)))
            };
            cells.push(CellResult {
                beta: parse_f64(f[0], "beta")?,
                gamma: parse_f64(f[1], "gamma")?,
                trials: parse_usize(f[2], "trials")?,
                explosions: parse_usize(f[3], "explosions")?,
                wilson_lo: parse_f64(f[4], "wilson_lo")?,
                wilson_hi: parse_f64(f[5], "wilson_hi")?,
                mean_blowup_time: if f[6].is_empty() {
                    None
                } else {
                    Some(parse_f64(f[6], "mean_blowup_time")?)
                },
                below_ito: parse_bool(f[7], "below_ito")?,
                below_theorem: parse_bool(f[8], "below_theorem")?,
                below_combined: parse_bool(f[9], "below_combined")?,
                // the boundary flag is derived, not persisted in the CSV;
                // consumers that need it recompute via classify_cell
                boundary: false,
            });
        }
        Ok(ExplosionMap { eta: 0.0, cells })
    }

    /// Stable digest of the CSV serialization.
    pub fn digest(&self) -> u64 {
        let mut h = StableHasher::new();
        h.write_str(&self.to_csv());
        h.finish()
    }
}

/// Runs the sweep cell by cell. With a persistence path the results file is
/// rewritten after every cell (single writer), and an existing file is
/// resumed: rows whose (β, γ) match the upcoming cells are kept and those
/// cells skipped, so interrupting after k cells and resuming yields the
/// identical final map.
pub fn run_sweep(spec: &SweepSpec, persist: Option<&Path>) -> Result<ExplosionMap> {
    spec.validate()?;
    let eta = spec.spectrum.compute_eta()?;
    let cells = spec.cells();

    let mut done: Vec<CellResult> = Vec::new();
    if let Some(path) = persist {
        if path.exists() {
            let text = std::fs::read_to_string(path)?;
            let prior = ExplosionMap::from_csv(&text)?;
            for (mut row, (beta, gamma)) in prior.cells.into_iter().zip(&cells) {
                if row.beta == *beta && row.gamma == *gamma && row.trials == spec.trials_per_cell {
                    row.boundary = classify_cell(row.beta, row.gamma, eta).boundary;
                    done.push(row);
                } else {
                    break;
                }
            }
        }
    }

    let mut map = ExplosionMap {
        eta,
        cells: done,
    };
    for (index, &(beta, gamma)) in cells.iter().enumerate() {
        if index < map.cells.len() {
            continue; // resumed
        }
        let mut model = spec.model_template.clone();
        model.beta = beta;
        model.gamma = gamma;
        let cell_seed = labeled_seed(spec.master_seed, index as u64);
        let est = estimate_explosion_probability(
            &model,
            &spec.spectrum,
            &spec.basis,
            &spec.solver,
            &spec.u0,
            spec.trials_per_cell,
            cell_seed,
        )?;
        let class = classify_cell(beta, gamma, eta);
        map.cells.push(CellResult {
            beta,
            gamma,
            trials: est.trials,
            explosions: est.explosions,
            wilson_lo: est.interval.lo,
            wilson_hi: est.interval.hi,
            mean_blowup_time: est.mean_blowup_time,
            below_ito: class.below_ito,
            below_theorem: class.below_theorem,
            below_combined: class.below_combined,
            boundary: class.boundary,
        });
        if let Some(path) = persist {
            persist_results(&map, path)?;
        }
    }
    Ok(map)
}

/// Atomically rewrites the results CSV (write to a sibling temp file, then
/// rename), so a crash never leaves a truncated file behind.
pub fn persist_results(map: &ExplosionMap, path: &Path) -> Result<()> {
    let tmp = path.with_extension("csv.partial");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(map.to_csv().as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}
