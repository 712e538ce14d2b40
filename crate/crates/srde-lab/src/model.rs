//! Drift and diffusion specifications.
//!
//! Two drift kinds (the power-dissipative `f(u) = −K1·|u|^{β−1}u` and
//! `f ≡ 0`) and two diffusion kinds (polynomial `σ(u) = K2(1 + |u|^γ)` and
//! additive `σ ≡ K2`). Arbitrary user formulas are deliberately out of
//! scope; these four cover the dissipative-versus-multiplicative regimes
//! the lab studies.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DriftKind {
    PowerDissipative,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiffusionKind {
    Polynomial,
    Additive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub beta: f64,
    pub gamma: f64,
    pub k1: f64,
    pub k2: f64,
    pub c0: f64,
    pub drift: DriftKind,
    pub diffusion: DiffusionKind,
}

impl ModelSpec {
    pub fn new(
        beta: f64,
        gamma: f64,
        k1: f64,
        k2: f64,
        c0: f64,
        drift: DriftKind,
        diffusion: DiffusionKind,
    ) -> Result<Self> {
        if !(beta > 1.0) || !beta.is_finite() {
            return Err(Error::invalid(format!("beta must be > 1, got {beta}")));
        }
        // gamma in (0, 1] is allowed for diagnostic configurations; the
        // assumption checker flags such configurations.
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::invalid(format!("gamma must be >= 0, got {gamma}")));
        }
        if !(k1 > 0.0) || !(k2 > 0.0) {
            return Err(Error::invalid(format!(
                "K1 and K2 must be positive, got K1 = {k1}, K2 = {k2}"
            )));
        }
        if !(c0 > 0.0) {
            return Err(Error::invalid(format!("c0 must be positive, got {c0}")));
        }
        Ok(ModelSpec {
            beta,
            gamma,
            k1,
            k2,
            c0,
            drift,
            diffusion,
        })
    }

    /// Canonical dissipative model: power drift, polynomial diffusion,
    /// K1 = K2 = c0 = 1.
    pub fn canonical(beta: f64, gamma: f64) -> Result<Self> {
        Self::new(
            beta,
            gamma,
            1.0,
            1.0,
            1.0,
            DriftKind::PowerDissipative,
            DiffusionKind::Polynomial,
        )
    }

    /// Pointwise drift f(u). Odd in u for the power kind.
    pub fn drift_eval(&self, u: f64) -> f64 {
        match self.drift {
            DriftKind::PowerDissipative => -self.k1 * u.abs().powf(self.beta - 1.0) * u,
            DriftKind::Zero => 0.0,
        }
    }

    /// Pointwise diffusion σ(u). Even in u and nonnegative for both kinds.
    pub fn sigma_eval(&self, u: f64) -> f64 {
        match self.diffusion {
            DiffusionKind::Polynomial => self.k2 * (1.0 + u.abs().powf(self.gamma)),
            DiffusionKind::Additive => self.k2,
        }
    }

    /// Exact flow of du/dt = f(u) over a time span `dt >= 0`.
    ///
    /// For the power drift the scalar ODE has the closed-form solution
    /// sign(u)·(|u|^{−(β−1)} + K1(β−1)dt)^{−1/(β−1)}; the zero drift is the
    /// identity. Used by the split-step integrator.
    pub fn drift_flow(&self, u: f64, dt: f64) -> f64 {
        match self.drift {
            DriftKind::Zero => u,
            DriftKind::PowerDissipative => {
                crate::ode::dissipative_flow(u, self.beta, self.k1, dt)
            }
        }
    }

    /// Worst sampled violation of the dissipativity bound: the maximum of
    /// `f(u)·sign(u) + K1|u|^β` over samples with `|u| > c0`. Nonpositive
    /// means the sampled check passes; if no sample exceeds `c0` the check
    /// passes vacuously and the margin is `-inf`.
    pub fn dissipativity_margin(&self, samples: &[f64]) -> f64 {
        samples
            .iter()
            .filter(|u| u.abs() > self.c0)
            .map(|&u| self.drift_eval(u) * u.signum() + self.k1 * u.abs().powf(self.beta))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}
