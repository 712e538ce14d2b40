//! A miniature explosion-probability sweep over the (beta, gamma) grid,
//! printed against the analytic threshold lines.
//!
//! ```bash
//! cargo run --release --example explosion_sweep
//! ```

use srde_lab::harness::{run_sweep, SweepSpec};
use srde_lab::spde::{SolverConfig, SpdeScheme};
use srde_lab::{ModelSpec, NoiseSpectrum, SpectralBasis};

fn main() -> srde_lab::Result<()> {
    let n = 32;
    let basis = SpectralBasis::dirichlet_interval(std::f64::consts::PI, n, 4 * n)?;
    let u0: Vec<f64> = basis.grid_points().iter().map(|&x| 5.0 * x.sin()).collect();
    let spec = SweepSpec {
        betas: vec![2.0, 4.0, 6.0],
        gammas: vec![1.2, 1.8, 2.2],
        trials_per_cell: 40,
        model_template: ModelSpec::canonical(3.0, 1.5)?,
        solver: SolverConfig {
            num_modes: n,
            grid_size: 4 * n,
            noise_modes: n,
            dt: 5e-4,
            horizon: 0.5,
            explosion_threshold: 1e6,
            scheme: SpdeScheme::SemiImplicitSplit,
            ladder_enabled: true,
        },
        spectrum: NoiseSpectrum::white(0.6)?,
        basis,
        u0,
        master_seed: 12,
    };

    let map = run_sweep(&spec, None)?;
    println!("eta = {}, {} trials per cell", map.eta, spec.trials_per_cell);
    println!(
        "{:>5} {:>6} {:>10} {:>18} {:>24}",
        "beta", "gamma", "exploded", "wilson 95%", "below ito/theorem/comb"
    );
    for cell in &map.cells {
        println!(
            "{:>5} {:>6} {:>7}/{:<3} [{:.3}, {:.3}] {:>12}/{}/{}{}",
            cell.beta,
            cell.gamma,
            cell.explosions,
            cell.trials,
            cell.wilson_lo,
            cell.wilson_hi,
            cell.below_ito,
            cell.below_theorem,
            cell.below_combined,
            if cell.boundary { " (boundary)" } else { "" }
        );
    }
    println!("\nresults digest {:016x}", map.digest());
    Ok(())
}
