//! The closed-form decay oracles: exact solution, sup-norm envelope, and
//! the initial-data-free uniform bound.
//!
//! ```bash
//! cargo run --example ode_decay_tables
//! ```

use srde_lab::ode::{decay_envelope, exact_solution, uniform_bound};

fn main() -> srde_lab::Result<()> {
    let beta = 3.0;
    let k1 = 1.0;
    println!("beta = {beta}, K1 = {k1}");
    println!("{:>8} {:>14} {:>14} {:>14}", "t", "exact(phi0=10)", "envelope", "uniform");
    for i in 0..=10 {
        let t = i as f64;
        let exact = exact_solution(10.0, beta, t)?;
        let env = decay_envelope(10.0, beta, k1, t)?;
        let ub = if t > 0.0 { uniform_bound(beta, k1, t)? } else { f64::INFINITY };
        println!("{t:>8.2} {exact:>14.6} {env:>14.6} {ub:>14.6}");
    }

    println!("\nthe envelope forgets the initial data: value at t = 1 from");
    for &phi0 in &[1e1, 1e3, 1e6, 1e12] {
        println!("  u0 = {phi0:>8.0e}: {:.8}", decay_envelope(phi0, beta, k1, 1.0)?);
    }
    println!("  u0 -> inf   : {:.8}", uniform_bound(beta, k1, 1.0)?);
    Ok(())
}
