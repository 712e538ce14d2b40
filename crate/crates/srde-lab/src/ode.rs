//! Closed-form solutions and envelopes for the dissipative scalar ODE
//! dφ/dt = −|φ|^{β−1} φ, used as ground truth throughout the test suite.
//!
//! The explicit solution φ(t) = ±(|φ0|^{−(β−1)} + (β−1)t)^{−1/(β−1)} decays
//! with a bound that is *independent of the initial data*: as |φ0| → ∞ the
//! value at any fixed t > 0 stays finite. `decay_envelope` is the matching
//! sup-norm envelope for the forced problem, with rate K1/2^β and prefactor
//! 3/2; `uniform_bound` is its initial-data-free limit.

use crate::error::{Error, Result};

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 1.0) || !beta.is_finite() {
        return Err(Error::invalid(format!("beta must be > 1, got {beta}")));
    }
    Ok(())
}

/// Exact solution of dφ/dt = −|φ|^{β−1}φ at time `t >= 0` from `phi0`.
///
/// φ0 = 0 returns 0 (the unique fixed point; the closed form is written
/// for nonzero data but extends by continuity).
pub fn exact_solution(phi0: f64, beta: f64, t: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("time must be nonnegative, got {t}")));
    }
    Ok(dissipative_flow(phi0, beta, 1.0, t))
}

/// Flow of dφ/dt = −K1|φ|^{β−1}φ, the K1-rated generalization used by the
/// split-step integrator. Equal to `exact_solution(phi0, beta, K1 t)`.
pub(crate) fn dissipative_flow(phi0: f64, beta: f64, k1: f64, t: f64) -> f64 {
    if phi0 == 0.0 {
        return 0.0;
    }
    let p = beta - 1.0;
    let base = phi0.abs().powf(-p) + k1 * p * t;
    phi0.signum() * base.powf(-1.0 / p)
}

/// Sup-norm decay envelope
/// (3/2)·(u0^{−(β−1)} + K1 t / (2^β (β−1)))^{−1/(β−1)}.
pub fn decay_envelope(u0_sup: f64, beta: f64, k1: f64, t: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(u0_sup > 0.0) {
        return Err(Error::invalid(format!(
            "u0 sup-norm must be positive, got {u0_sup}"
        )));
    }
    if !(k1 > 0.0) {
        return Err(Error::invalid(format!("K1 must be positive, got {k1}")));
    }
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("time must be nonnegative, got {t}")));
    }
    let p = beta - 1.0;
    let base = u0_sup.powf(-p) + k1 * t / (2f64.powf(beta) * p);
    Ok(1.5 * base.powf(-1.0 / p))
}

/// The u0 → ∞ limit of the envelope,
/// (3/2)·(K1 t / (2^β (β−1)))^{−1/(β−1)}; finite for every t > 0 and
/// strictly decreasing in t. This is the sharp constant for the
/// initial-data-free bound C·t^{−1/(β−1)}.
pub fn uniform_bound(beta: f64, k1: f64, t: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(k1 > 0.0) {
        return Err(Error::invalid(format!("K1 must be positive, got {k1}")));
    }
    if !(t > 0.0) {
        return Err(Error::invalid(format!(
            "uniform bound requires t > 0 (it diverges at t = 0), got {t}"
        )));
    }
    let p = beta - 1.0;
    Ok(1.5 * (k1 * t / (2f64.powf(beta) * p)).powf(-1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn identity_at_time_zero() {
        assert_relative_eq!(exact_solution(1.0, 3.0, 0.0).unwrap(), 1.0);
        assert_relative_eq!(exact_solution(-7.5, 2.2, 0.0).unwrap(), -7.5, max_relative = 1e-14);
    }

    #[test]
    fn closed_form_values() {
        // beta = 3, phi0 = 1, t = 1.5: (1 + 2*1.5)^(-1/2) = 0.5
        // confirmed against the adaptive integrator oracle in the acceptance
        // suite to 1e-8
        assert_relative_eq!(exact_solution(1.0, 3.0, 1.5).unwrap(), 0.5, max_relative = 1e-14);
        // beta = 2, phi0 = -2, t = 1: -(0.5 + 1)^(-1) = -2/3
        assert_relative_eq!(
            exact_solution(-2.0, 2.0, 1.0).unwrap(),
            -2.0 / 3.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn zero_initial_data() {
        assert_eq!(exact_solution(0.0, 5.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_beta_at_most_one() {
        assert!(exact_solution(1.0, 1.0, 0.5).is_err());
        assert!(decay_envelope(1.0, 0.9, 1.0, 0.5).is_err());
        assert!(uniform_bound(1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn envelope_at_zero_is_prefactor() {
        assert_relative_eq!(decay_envelope(4.0, 3.0, 1.0, 0.0).unwrap(), 6.0, max_relative = 1e-14);
    }

    #[test]
    fn envelope_spot_value() {
        // beta = 3, K1 = 1, u0 = 1, t = 16: 1.5 (1 + 16/16)^(-1/2)
        let v = decay_envelope(1.0, 3.0, 1.0, 16.0).unwrap();
        assert_relative_eq!(v, 1.5 / 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(v, 1.06066, max_relative = 1e-5);
    }

    #[test]
    fn envelope_large_data_limit() {
        let t = 0.37;
        let ub = uniform_bound(3.0, 1.0, t).unwrap();
        let near = decay_envelope(1e12, 3.0, 1.0, t).unwrap();
        assert_relative_eq!(near, ub, max_relative = 1e-10);
        assert!(ub.is_finite());
    }

    #[test]
    fn uniform_bound_power_law() {
        // beta = 3 means slope -1/2: doubling t multiplies by 2^(-1/2)
        let a = uniform_bound(3.0, 1.0, 1.0).unwrap();
        let b = uniform_bound(3.0, 1.0, 2.0).unwrap();
        assert_relative_eq!(b / a, 2f64.powf(-0.5), max_relative = 1e-13);
        assert!(uniform_bound(3.0, 1.0, 0.0).is_err());
    }

    proptest! {
        // semiflow: phi(s+t) = phi(t) started from phi(s)
        #[test]
        fn semiflow(phi0 in -100.0f64..100.0, beta in 1.1f64..6.0,
                    s in 0.0f64..5.0, t in 0.0f64..5.0) {
            let mid = exact_solution(phi0, beta, s).unwrap();
            let two = exact_solution(mid, beta, t).unwrap();
            let one = exact_solution(phi0, beta, s + t).unwrap();
            prop_assert!((two - one).abs() <= 1e-12 * (1.0 + one.abs()),
                         "{} vs {}", two, one);
        }

        // odd in phi0, |phi| nonincreasing in t
        #[test]
        fn odd_and_decaying(phi0 in 0.01f64..50.0, beta in 1.1f64..6.0,
                            t in 0.0f64..10.0, dt in 0.0f64..5.0) {
            let plus = exact_solution(phi0, beta, t).unwrap();
            let minus = exact_solution(-phi0, beta, t).unwrap();
            prop_assert!((plus + minus).abs() <= 1e-13 * (1.0 + plus.abs()));
            let later = exact_solution(phi0, beta, t + dt).unwrap();
            prop_assert!(later.abs() <= plus.abs() + 1e-15);
        }

        // envelope monotone: nonincreasing in t, nondecreasing in u0
        #[test]
        fn envelope_monotone(u0 in 0.1f64..1e6, beta in 1.1f64..6.0, k1 in 0.1f64..10.0,
                             t in 0.0f64..20.0, dt in 0.0f64..10.0, du in 0.0f64..100.0) {
            let base = decay_envelope(u0, beta, k1, t).unwrap();
            prop_assert!(decay_envelope(u0, beta, k1, t + dt).unwrap() <= base * (1.0 + 1e-12));
            prop_assert!(decay_envelope(u0 + du, beta, k1, t).unwrap() >= base * (1.0 - 1e-12));
            prop_assert!(base <= 1.5 * u0 * (1.0 + 1e-12));
            if t > 0.0 {
                prop_assert!(base <= uniform_bound(beta, k1, t).unwrap() * (1.0 + 1e-12));
            }
        }
    }
}
