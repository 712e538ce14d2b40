//! Field trajectories in two regimes under the same white-noise forcing:
//! without drift a strongly multiplicative noise blows the solution up;
//! the dissipative drift rescues it.
//!
//! ```bash
//! cargo run --release --example spde_trajectory
//! ```

use srde_lab::model::{DiffusionKind, DriftKind, ModelSpec};
use srde_lab::spde::{simulate_spde, SolverConfig, SpdeScheme, Verdict};
use srde_lab::{NoiseSpectrum, SpectralBasis};

fn main() -> srde_lab::Result<()> {
    let n = 32;
    let basis = SpectralBasis::dirichlet_interval(std::f64::consts::PI, n, 4 * n)?;
    let spectrum = NoiseSpectrum::white(0.6)?;
    let config = SolverConfig {
        num_modes: n,
        grid_size: 4 * n,
        noise_modes: n,
        dt: 2.5e-4,
        horizon: 1.0,
        explosion_threshold: 1e6,
        scheme: SpdeScheme::SemiImplicitSplit,
        ladder_enabled: true,
    };
    let u0: Vec<f64> = basis.grid_points().iter().map(|&x| 5.0 * x.sin()).collect();

    let cases = [
        ("no drift, gamma = 2.0", DriftKind::Zero, 3.0, 2.0),
        ("beta = 6 drift, gamma = 2.0", DriftKind::PowerDissipative, 6.0, 2.0),
    ];
    for (name, drift, beta, gamma) in cases {
        let model = ModelSpec::new(beta, gamma, 1.0, 1.0, 1.0, drift, DiffusionKind::Polynomial)?;
        println!("== {name}");
        for seed in 0..3 {
            let rec = simulate_spde(&u0, &model, &spectrum, &basis, &config, seed)?;
            let verdict = match rec.verdict {
                Verdict::SurvivedToHorizon => "survived to the horizon".to_string(),
                Verdict::ExplodedAt { t } => format!("exploded at t = {t:.4}"),
                Verdict::NonFiniteAt { t } => format!("went non-finite at t = {t:.4}"),
            };
            let peak = rec
                .series
                .iter()
                .map(|p| p.sup_norm)
                .fold(0.0f64, f64::max);
            println!(
                "   seed {seed}: {verdict}; peak sup-norm {peak:.3e}, {} ladder crossings, digest {:016x}",
                rec.crossings.len(),
                rec.digest()
            );
            if let Some(last) = rec.crossings.last() {
                println!(
                    "     last crossing: level 3^{} c0 = {:.1} at t = {:.4}",
                    last.level_index, last.level, last.time
                );
            }
        }
    }
    Ok(())
}
