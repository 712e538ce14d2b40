//! Exit-time Monte Carlo for the finite-dimensional comparison SDE: when
//! the drift dominates, the second moment stays flat as the exit radius
//! grows.
//!
//! ```bash
//! cargo run --release --example sde_exit_times
//! ```

use srde_lab::model::DriftKind;
use srde_lab::sde::{ito_condition, moment_estimate, SdeConfig, SdeScheme};

fn main() -> srde_lab::Result<()> {
    let beta = 3.0;
    for gamma in [1.5, 2.5] {
        println!(
            "beta = {beta}, gamma = {gamma}: drift-domination condition gamma < (beta+1)/2 is {}",
            ito_condition(beta, gamma)
        );
    }
    println!();

    let base = SdeConfig {
        dimension: 1,
        beta,
        gamma: 1.5,
        x0: vec![0.0],
        dt: 1e-3,
        horizon: 1.0,
        exit_radius: 100.0,
        scheme: SdeScheme::TamedEuler,
        drift: DriftKind::PowerDissipative,
    };
    println!("E|X(T ^ tau_R)|^2 across exit radii (beta = 3, gamma = 1.5, 4000 trials):");
    for radius in [1e2, 1e3, 1e4] {
        let mut config = base.clone();
        config.exit_radius = radius;
        let est = moment_estimate(&config, 4000, 42)?;
        println!(
            "  R = {radius:>8.0e}: {:.4} +- {:.4} ({} exits)",
            est.mean, est.std_error, est.exits
        );
    }
    Ok(())
}
