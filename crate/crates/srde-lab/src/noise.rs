//! Noise spectra: mode amplitudes λ_j with summability exponents (θ, ρ).
//!
//! The balance constant η = θ(ρ−2)/ρ couples eigenvalue decay to noise
//! summability: ρ = 2 is trace-class noise (η = 0); ρ = ∞ — represented
//! here by `f64::INFINITY` — is space-time white noise in 1-D, where η = θ.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::BufRead;
use std::path::Path;

/// Closed-form generators or explicit tables for the amplitudes λ_j.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LambdaKind {
    /// λ_j ≡ 1 (space-time white noise).
    White,
    /// λ_j = j^{−delta}.
    PowerLaw { delta: f64 },
    /// Explicit amplitudes; modes beyond the table carry λ_j = 0.
    Table(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpectrum {
    kind: LambdaKind,
    /// Summability exponent ρ ∈ [2, ∞]; `f64::INFINITY` is the sup-norm case.
    rho: f64,
    /// Eigenvalue-decay exponent θ > 0.
    theta: f64,
}

impl NoiseSpectrum {
    pub fn new(kind: LambdaKind, rho: f64, theta: f64) -> Result<Self> {
        if !(rho >= 2.0) {
            return Err(Error::invalid(format!("rho must be in [2, inf], got {rho}")));
        }
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::invalid(format!(
                "theta must be positive and finite, got {theta}"
            )));
        }
        if let LambdaKind::Table(ref l) = kind {
            if l.iter().any(|&v| !(v >= 0.0)) {
                return Err(Error::invalid("lambda amplitudes must be nonnegative"));
            }
        }
        if let LambdaKind::PowerLaw { delta } = kind {
            if !delta.is_finite() {
                return Err(Error::invalid("power-law delta must be finite"));
            }
        }
        Ok(NoiseSpectrum { kind, rho, theta })
    }

    /// White noise (λ ≡ 1, ρ = ∞) with decay exponent θ.
    pub fn white(theta: f64) -> Result<Self> {
        Self::new(LambdaKind::White, f64::INFINITY, theta)
    }

    /// Power-law amplitudes λ_j = j^{−delta} with the given (ρ, θ).
    pub fn power_law(delta: f64, rho: f64, theta: f64) -> Result<Self> {
        Self::new(LambdaKind::PowerLaw { delta }, rho, theta)
    }

    pub fn kind(&self) -> &LambdaKind {
        &self.kind
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Amplitude of mode `j >= 1`.
    pub fn lambda(&self, j: usize) -> f64 {
        match &self.kind {
            LambdaKind::White => 1.0,
            LambdaKind::PowerLaw { delta } => (j as f64).powf(-delta),
            LambdaKind::Table(l) => l.get(j - 1).copied().unwrap_or(0.0),
        }
    }

    /// η = θ(ρ−2)/ρ without the admissibility check (2/∞ = 0 makes the
    /// ρ = ∞ limit come out as θ).
    pub fn eta_raw(&self) -> f64 {
        self.theta * (1.0 - 2.0 / self.rho)
    }

    /// η = θ(ρ−2)/ρ, required to be < 1; the error carries the value.
    pub fn compute_eta(&self) -> Result<f64> {
        let eta = self.eta_raw();
        if eta >= 1.0 {
            return Err(Error::AssumptionViolation {
                what: "eta = theta (rho - 2) / rho must be < 1",
                value: eta,
            });
        }
        Ok(eta)
    }

    /// Reads amplitudes from a two-column CSV `index,lambda` (1-based,
    /// contiguous indices; a header line is permitted).
    pub fn lambdas_from_csv(path: &Path) -> Result<Vec<f64>> {
        let file = std::fs::File::open(path)?;
        let mut out = Vec::new();
        for (lineno, line) in std::io::BufReader::new(file).lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let mut parts = trimmed.split(',');
            let (a, b) = (parts.next().unwrap_or(""), parts.next().unwrap_or(""));
            let idx: usize = match a.trim().parse() {
                Ok(v) => v,
                Err(_) if lineno == 0 => continue, // header
                Err(_) => {
                    return Err(Error::invalid(format!(
                        "bad index `{a}` on line {} of {}",
                        lineno + 1,
                        path.display()
                    )))
                }
            };
            let val: f64 = b.trim().parse().map_err(|_| {
                Error::invalid(format!(
                    "bad lambda `{b}` on line {} of {}",
                    lineno + 1,
                    path.display()
                ))
            })?;
            if idx != out.len() + 1 {
                return Err(Error::invalid(format!(
                    "lambda CSV indices must be 1-based and contiguous; expected {}, got {idx}",
                    out.len() + 1
                )));
            }
            if !(val >= 0.0) {
                return Err(Error::invalid(format!("lambda_{idx} = {val} is negative")));
            }
            out.push(val);
        }
        if out.is_empty() {
            return Err(Error::invalid(format!(
                "no lambda rows found in {}",
                path.display()
            )));
        }
        Ok(out)
    }
}
