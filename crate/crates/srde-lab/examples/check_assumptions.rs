//! Assumption checking for three noise/model configurations.
//!
//! ```bash
//! cargo run --example check_assumptions
//! ```

use srde_lab::{check_assumptions, classify_cell, ModelSpec, NoiseSpectrum, SpectralBasis};

fn main() -> srde_lab::Result<()> {
    let basis = SpectralBasis::dirichlet_interval(std::f64::consts::PI, 64, 256)?;

    let cases = [
        ("white noise, strong drift", NoiseSpectrum::white(0.6)?, 5.0, 1.5),
        ("white noise, weak drift", NoiseSpectrum::white(0.6)?, 3.0, 1.5),
        ("trace-class noise", NoiseSpectrum::power_law(2.0, 2.0, 1.0)?, 3.0, 1.8),
    ];

    for (name, spectrum, beta, gamma) in cases {
        let model = ModelSpec::canonical(beta, gamma)?;
        let report = check_assumptions(&basis, &spectrum, &model, 10_000)?;
        println!("== {name} (beta = {beta}, gamma = {gamma})");
        println!("   eta = {:.3}", report.eta);
        println!(
            "   exponent condition: gamma < {:.3} -> {}",
            report.gamma_threshold,
            if report.gamma_beta_ok { "satisfied" } else { "VIOLATED" }
        );
        for line in &report.diagnostics {
            println!("   {line}");
        }
        let class = classify_cell(beta, gamma, report.eta);
        println!(
            "   thresholds: ito {} | theorem {} | combined {}{}",
            class.below_ito, class.below_theorem, class.below_combined,
            if class.boundary { " (boundary)" } else { "" }
        );
        println!();
    }
    Ok(())
}
