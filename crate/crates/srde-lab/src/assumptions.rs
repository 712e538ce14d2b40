//! Automated checking of the standing assumptions on the operator spectrum,
//! the noise, and the drift/diffusion exponents.
//!
//! Three checks are evaluated:
//!  * summability of the noise amplitudes, `(Σ λ_j^ρ |e_j|_∞²)^{2/ρ}` for
//!    finite ρ, degrading to `sup_j λ_j` at ρ = ∞;
//!  * summability of the spectral tail, `Σ α_k^{−θ} |e_k|_∞²`;
//!  * the exponent condition γ < 1 + (1−η)(β−1)/2, evaluated strictly.
//!
//! The series are diagnosed from partial sums: divergence is declared when
//! the relative increment between `tail_terms/2` and `tail_terms` exceeds
//! 1e-3 and the terms are not decaying faster than k^{−1.05}. Convergent
//! sums are reported as the partial sum plus an integral tail estimate
//! `a_K · K / (p − 1)` from the fitted decay exponent p, which makes the
//! reported value accurate long before the raw partial sum settles.

use crate::error::Result;
use crate::model::ModelSpec;
use crate::noise::NoiseSpectrum;
use crate::spectral::SpectralBasis;
use serde::{Deserialize, Serialize};

/// Relative-increment threshold of the divergence heuristic.
const INCREMENT_TOL: f64 = 1e-3;
/// Minimal decay exponent regarded as summable.
const DECAY_EXPONENT_MIN: f64 = 1.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SumOutcome {
    /// Partial sum plus integral tail estimate.
    Finite { value: f64 },
    /// The partial sum kept growing; carries the last partial sum.
    Divergent { partial_sum: f64 },
}

impl SumOutcome {
    pub fn is_finite(&self) -> bool {
        matches!(self, SumOutcome::Finite { .. })
    }

    pub fn value(&self) -> f64 {
        match *self {
            SumOutcome::Finite { value } => value,
            SumOutcome::Divergent { partial_sum } => partial_sum,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub eta: f64,
    pub eta_ok: bool,
    pub lambda_sum: SumOutcome,
    pub alpha_sum: SumOutcome,
    /// Strict check of γ < 1 + (1−η)(β−1)/2.
    pub gamma_beta_ok: bool,
    /// The threshold 1 + (1−η)(β−1)/2 itself.
    pub gamma_threshold: f64,
    pub diagnostics: Vec<String>,
}

impl AssumptionReport {
    pub fn all_ok(&self) -> bool {
        self.eta_ok && self.lambda_sum.is_finite() && self.alpha_sum.is_finite() && self.gamma_beta_ok
    }
}

/// Diagnoses a positive-term series from its terms `a(k)`, k = 1..=K.
fn diagnose_series(term: impl Fn(usize) -> f64, tail_terms: usize) -> (SumOutcome, Option<f64>) {
    let half = (tail_terms / 2).max(1);
    let mut partial_half = 0.0;
    let mut partial = 0.0;
    for k in 1..=tail_terms {
        partial += term(k);
        if k == half {
            partial_half = partial;
        }
    }
    let a_half = term(half);
    let a_full = term(tail_terms);
    // local decay exponent from the term ratio over the last octave
    let decay = if a_full > 0.0 && a_half > 0.0 {
        Some(-(a_full / a_half).ln() / ((tail_terms as f64 / half as f64).ln()))
    } else {
        None
    };
    let rel_increment = if partial > 0.0 {
        (partial - partial_half) / partial
    } else {
        0.0
    };
    let decaying_fast = decay.is_some_and(|p| p > DECAY_EXPONENT_MIN);
    if rel_increment > INCREMENT_TOL && !decaying_fast {
        return (SumOutcome::Divergent { partial_sum: partial }, decay);
    }
    // integral tail bound for power-like decay; exact zero tail otherwise
    let tail = match decay {
        Some(p) if p > DECAY_EXPONENT_MIN && a_full > 0.0 => {
            a_full * tail_terms as f64 / (p - 1.0)
        }
        _ => 0.0,
    };
    (SumOutcome::Finite { value: partial + tail }, decay)
}

/// Evaluates the noise and spectrum summability conditions and the exponent
/// condition. Never errors: every failure is carried in the report.
pub fn check_assumptions(
    basis: &SpectralBasis,
    spectrum: &NoiseSpectrum,
    model: &ModelSpec,
    tail_terms: usize,
) -> Result<AssumptionReport> {
    let tail_terms = tail_terms.max(100);
    let mut diagnostics = Vec::new();

    let eta = spectrum.eta_raw();
    let eta_ok = eta < 1.0;
    if !eta_ok {
        diagnostics.push(format!("eta = {eta:.6} violates eta < 1"));
    }

    // available spectral range (tabulated bases end at their table)
    let spectral_terms = (1..=tail_terms)
        .take_while(|&k| basis.eigen_data(k).is_some())
        .count();
    if spectral_terms < tail_terms {
        diagnostics.push(format!(
            "spectral data ends at mode {spectral_terms}; sums truncated there"
        ));
    }

    // noise summability
    let rho = spectrum.rho();
    let (lambda_sum, lambda_decay) = if rho.is_infinite() {
        let sup = (1..=tail_terms)
            .map(|j| spectrum.lambda(j))
            .fold(0.0f64, f64::max);
        if sup.is_finite() {
            (SumOutcome::Finite { value: sup }, None)
        } else {
            (SumOutcome::Divergent { partial_sum: sup }, None)
        }
    } else {
        let (raw, decay) = diagnose_series(
            |j| {
                let sup = basis.eigen_data(j).map(|(_, s)| s).unwrap_or(0.0);
                spectrum.lambda(j).powf(rho) * sup * sup
            },
            spectral_terms,
        );
        let out = match raw {
            SumOutcome::Finite { value } => SumOutcome::Finite {
                value: value.powf(2.0 / rho),
            },
            d => d,
        };
        (out, decay)
    };
    match &lambda_sum {
        SumOutcome::Finite { value } => diagnostics.push(format!(
            "noise summability: finite, value {value:.6}{}",
            if rho.is_infinite() { " (sup of lambda)" } else { "" }
        )),
        SumOutcome::Divergent { partial_sum } => diagnostics.push(format!(
            "noise summability: DIVERGENT (partial sum {partial_sum:.6}, decay exponent {:?})",
            lambda_decay
        )),
    }

    // spectral-tail summability: Σ α_k^{−θ} |e_k|_∞²; α_k = 0 modes are
    // excluded from the sum and flagged
    let theta = spectrum.theta();
    let mut zero_modes = 0usize;
    let (alpha_sum, alpha_decay) = diagnose_series(
        |k| match basis.eigen_data(k) {
            Some((a, s)) if a > 0.0 => a.powf(-theta) * s * s,
            Some(_) => {
                0.0 // counted separately below
            }
            None => 0.0,
        },
        spectral_terms,
    );
    for k in 1..=spectral_terms.min(4) {
        if let Some((a, _)) = basis.eigen_data(k) {
            if a == 0.0 {
                zero_modes += 1;
            }
        }
    }
    if zero_modes > 0 {
        diagnostics.push(format!(
            "{zero_modes} leading eigenvalue(s) are zero and were skipped in the alpha sum"
        ));
    }
    match &alpha_sum {
        SumOutcome::Finite { value } => diagnostics.push(format!(
            "spectral tail sum: finite, value {value:.6} (decay exponent {})",
            alpha_decay.map_or("n/a".into(), |p| format!("{p:.3}"))
        )),
        SumOutcome::Divergent { partial_sum } => diagnostics.push(format!(
            "spectral tail sum: DIVERGENT (partial sum {partial_sum:.6}, decay exponent {})",
            alpha_decay.map_or("n/a".into(), |p| format!("{p:.3}"))
        )),
    }

    // exponent condition, strict inequality
    let gamma_threshold = 1.0 + (1.0 - eta) * (model.beta - 1.0) / 2.0;
    let gamma_beta_ok = model.gamma < gamma_threshold;
    diagnostics.push(format!(
        "exponent condition: gamma = {} {} threshold {gamma_threshold:.6}",
        model.gamma,
        if gamma_beta_ok { "<" } else { ">=" }
    ));
    if model.gamma <= 1.0 {
        diagnostics.push(format!(
            "gamma = {} is outside the super-linear regime (gamma > 1) that the exponent condition targets; \
             configuration accepted for diagnostics only",
            model.gamma
        ));
    }

    Ok(AssumptionReport {
        eta,
        eta_ok,
        lambda_sum,
        alpha_sum,
        gamma_beta_ok,
        gamma_threshold,
        diagnostics,
    })
}
