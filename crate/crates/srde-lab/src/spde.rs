//! Time-stepping for the 1-D mild-solution field equation with sup-norm
//! tracking, the tripling ladder, and explosion detection.
//!
//! The mild formulation
//!
//! ```text
//! u(t) = S(t)u0 + ∫0..t S(t−s) f(u(s)) ds + ∫0..t S(t−s) σ(u(s)) dW(s)
//! ```
//!
//! is advanced on the collocation grid with the nonlinearity evaluated
//! pseudospectrally (grid size M ≥ 4N). Two schemes:
//!
//! * `SemiImplicitSplit` (default) — the drift substep solves the pointwise
//!   scalar ODE exactly through its closed form, then the semigroup damps
//!   the modes, then the noise kicks. The stiff, explosion-relevant drift
//!   term therefore cannot blow up numerically: whatever growth appears is
//!   noise-driven.
//! * `ExponentialTamed` — u ← S(dt)[u + dt·f̃(u) + σ(u)⊙ΔW] with the tamed
//!   drift f̃ = f/(1 + dt|f|) applied pointwise.
//!
//! Explosion is operationally "sup-norm ≥ explosion_threshold"; finite-time
//! blow-up is not representable in floating point, and non-finite values
//! count as explosion too.

use crate::error::{Error, Result};
use crate::ladder::{Crossing, LadderState};
use crate::model::ModelSpec;
use crate::noise::NoiseSpectrum;
use crate::rng::{NoiseStreams, StableHasher};
use crate::spectral::SpectralBasis;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpdeScheme {
    ExponentialTamed,
    SemiImplicitSplit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub num_modes: usize,
    pub grid_size: usize,
    /// Number of driven noise modes J ≤ N.
    pub noise_modes: usize,
    pub dt: f64,
    pub horizon: f64,
    /// Sup-norm level declared "exploded" (must exceed 3²·c0).
    pub explosion_threshold: f64,
    pub scheme: SpdeScheme,
    pub ladder_enabled: bool,
}

impl SolverConfig {
    pub fn validate(&self, model: &ModelSpec) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.horizon > 0.0) {
            return Err(Error::invalid("horizon must be positive"));
        }
        if self.noise_modes == 0 || self.noise_modes > self.num_modes {
            return Err(Error::invalid(format!(
                "noise_modes must be in 1..=num_modes = {}, got {}",
                self.num_modes, self.noise_modes
            )));
        }
        if !(self.explosion_threshold > 9.0 * model.c0) {
            return Err(Error::invalid(format!(
                "explosion threshold {} must exceed 9 c0 = {}",
                self.explosion_threshold,
                9.0 * model.c0
            )));
        }
        Ok(())
    }

    pub fn num_steps(&self) -> usize {
        (self.horizon / self.dt).round().max(1.0) as usize
    }
}

/// One trajectory snapshot. `grid_values` and `coeffs` stay synchronized
/// (grid = inverse transform of coeffs to within round-off); `sup_norm` is
/// the max of |grid value|.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub time: f64,
    pub coeffs: Vec<f64>,
    pub grid_values: Vec<f64>,
    pub sup_norm: f64,
}

impl FieldState {
    /// Projects initial grid data onto the basis span (fields outside the
    /// span of the first N modes lose their unresolved components).
    pub fn from_grid(basis: &SpectralBasis, u0: &[f64]) -> Result<Self> {
        if u0.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("initial data must be finite"));
        }
        let coeffs = basis.forward_transform(u0)?;
        let grid_values = basis.inverse_transform(&coeffs)?;
        let sup_norm = sup(&grid_values);
        Ok(FieldState {
            time: 0.0,
            coeffs,
            grid_values,
            sup_norm,
        })
    }
}

fn sup(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
}

/// Grid-valued noise increment Σ_{j≤J} λ_j √dt ξ_j e_j with ξ_j drawn from
/// the per-mode streams.
pub fn noise_increment(
    spectrum: &NoiseSpectrum,
    basis: &SpectralBasis,
    noise_modes: usize,
    dt: f64,
    streams: &mut NoiseStreams,
) -> Result<Vec<f64>> {
    let coeffs = noise_increment_coeffs(spectrum, noise_modes, dt, streams)?;
    basis.inverse_transform(&coeffs)
}

/// Coefficient-space version of [`noise_increment`]: w_j = λ_j √dt ξ_j.
pub fn noise_increment_coeffs(
    spectrum: &NoiseSpectrum,
    noise_modes: usize,
    dt: f64,
    streams: &mut NoiseStreams,
) -> Result<Vec<f64>> {
    if streams.num_modes() < noise_modes {
        return Err(Error::SizeMismatch {
            what: "noise streams",
            expected: noise_modes,
            actual: streams.num_modes(),
        });
    }
    let sqrt_dt = dt.sqrt();
    let mut xi = vec![0.0; streams.num_modes()];
    streams.sample_step(&mut xi);
    Ok((0..noise_modes)
        .map(|j| spectrum.lambda(j + 1) * sqrt_dt * xi[j])
        .collect())
}

/// Reusable stepper: owns the per-dt decay table and scratch space.
pub struct SpdeStepper<'a> {
    basis: &'a SpectralBasis,
    model: &'a ModelSpec,
    config: &'a SolverConfig,
    decay: Vec<f64>,
}

impl<'a> SpdeStepper<'a> {
    pub fn new(basis: &'a SpectralBasis, model: &'a ModelSpec, config: &'a SolverConfig) -> Result<Self> {
        config.validate(model)?;
        if basis.num_modes() != config.num_modes || basis.grid_size() != config.grid_size {
            return Err(Error::invalid(format!(
                "basis ({} modes, {} grid points) does not match solver config ({}, {})",
                basis.num_modes(),
                basis.grid_size(),
                config.num_modes,
                config.grid_size
            )));
        }
        let decay = basis.decay_factors(config.dt)?;
        Ok(SpdeStepper {
            basis,
            model,
            config,
            decay,
        })
    }

    /// Advances the state by one step with the supplied grid-valued noise
    /// increment. Non-finite values do not raise; the caller inspects
    /// `sup_norm.is_finite()`.
    pub fn step(&self, state: &mut FieldState, dw_grid: &[f64]) -> Result<()> {
        if dw_grid.len() != self.config.grid_size {
            return Err(Error::SizeMismatch {
                what: "noise increment",
                expected: self.config.grid_size,
                actual: dw_grid.len(),
            });
        }
        let dt = self.config.dt;
        match self.config.scheme {
            SpdeScheme::SemiImplicitSplit => {
                // exact pointwise drift flow
                for v in state.grid_values.iter_mut() {
                    *v = self.model.drift_flow(*v, dt);
                }
                // semigroup in coefficient space
                let mut c = self.basis.forward_transform(&state.grid_values)?;
                for (ck, dk) in c.iter_mut().zip(&self.decay) {
                    *ck *= dk;
                }
                state.grid_values = self.basis.inverse_transform(&c)?;
                // noise kick at the post-semigroup state, then Galerkin
                // projection back onto the resolved modes (the pointwise
                // product sigma(u)·dW carries harmonics the basis cannot
                // hold; M >= 4N gives the pseudospectral margin)
                for (v, &g) in state.grid_values.iter_mut().zip(dw_grid) {
                    *v += self.model.sigma_eval(*v) * g;
                }
                state.coeffs = self.basis.forward_transform(&state.grid_values)?;
                state.grid_values = self.basis.inverse_transform(&state.coeffs)?;
            }
            SpdeScheme::ExponentialTamed => {
                // bracket on the grid: u + dt f̃(u) + σ(u)·ΔW
                let mut bracket = state.grid_values.clone();
                for (v, &g) in bracket.iter_mut().zip(dw_grid) {
                    let u = *v;
                    let f = self.model.drift_eval(u);
                    let tamed = f / (1.0 + dt * f.abs());
                    *v = u + dt * tamed + self.model.sigma_eval(u) * g;
                }
                let mut c = self.basis.forward_transform(&bracket)?;
                for (ck, dk) in c.iter_mut().zip(&self.decay) {
                    *ck *= dk;
                }
                state.grid_values = self.basis.inverse_transform(&c)?;
                state.coeffs = c;
            }
        }
        state.time += dt;
        state.sup_norm = sup(&state.grid_values);
        Ok(())
    }
}

/// One step with fresh noise from the streams (convenience wrapper for the
/// stepper + increment pair).
pub fn spde_step(
    state: &mut FieldState,
    model: &ModelSpec,
    spectrum: &NoiseSpectrum,
    basis: &SpectralBasis,
    config: &SolverConfig,
    streams: &mut NoiseStreams,
) -> Result<()> {
    let stepper = SpdeStepper::new(basis, model, config)?;
    let dw = noise_increment(spectrum, basis, config.noise_modes, config.dt, streams)?;
    stepper.step(state, &dw)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    SurvivedToHorizon,
    ExplodedAt { t: f64 },
    NonFiniteAt { t: f64 },
}

impl Verdict {
    /// Explosion tallies count threshold crossings and non-finite states
    /// alike.
    pub fn is_explosion(&self) -> bool {
        !matches!(self, Verdict::SurvivedToHorizon)
    }

    pub fn blowup_time(&self) -> Option<f64> {
        match *self {
            Verdict::SurvivedToHorizon => None,
            Verdict::ExplodedAt { t } | Verdict::NonFiniteAt { t } => Some(t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub t: f64,
    pub sup_norm: f64,
    pub level_index: u32,
}

/// Full path bookkeeping for one trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub seed: u64,
    pub config_digest: u64,
    /// Decimated (t, sup-norm, ladder level) series; the final state is
    /// always recorded.
    pub series: Vec<SeriesPoint>,
    pub crossings: Vec<Crossing>,
    pub verdict: Verdict,
    pub wall_secs: f64,
}

impl TrajectoryRecord {
    /// 64-bit digest of the run (seed, config digest, verdict, series),
    /// stable across platforms; two runs agree iff their digests do.
    pub fn digest(&self) -> u64 {
        let mut h = StableHasher::new();
        h.write_u64(self.seed);
        h.write_u64(self.config_digest);
        match self.verdict {
            Verdict::SurvivedToHorizon => h.write_u64(0),
            Verdict::ExplodedAt { t } => {
                h.write_u64(1);
                h.write_f64(t);
            }
            Verdict::NonFiniteAt { t } => {
                h.write_u64(2);
                h.write_f64(t);
            }
        }
        for p in &self.series {
            h.write_f64(p.t);
            h.write_f64(p.sup_norm);
            h.write_u64(p.level_index as u64);
        }
        h.finish()
    }
}

fn config_digest(model: &ModelSpec, config: &SolverConfig, u0: &[f64]) -> u64 {
    let mut h = StableHasher::new();
    h.write_f64(model.beta);
    h.write_f64(model.gamma);
    h.write_f64(model.k1);
    h.write_f64(model.k2);
    h.write_f64(model.c0);
    h.write_str(&format!("{:?}{:?}", model.drift, model.diffusion));
    h.write_u64(config.num_modes as u64);
    h.write_u64(config.grid_size as u64);
    h.write_u64(config.noise_modes as u64);
    h.write_f64(config.dt);
    h.write_f64(config.horizon);
    h.write_f64(config.explosion_threshold);
    h.write_str(&format!("{:?}", config.scheme));
    for &v in u0 {
        h.write_f64(v);
    }
    h.finish()
}

/// Cap on recorded series points; the stepper still sees every step.
const MAX_SERIES_POINTS: usize = 2048;

/// Runs one trajectory to the horizon, the explosion threshold, or the
/// first non-finite state. Deterministic given the seed.
pub fn simulate_spde(
    u0: &[f64],
    model: &ModelSpec,
    spectrum: &NoiseSpectrum,
    basis: &SpectralBasis,
    config: &SolverConfig,
    seed: u64,
) -> Result<TrajectoryRecord> {
    let start = std::time::Instant::now();
    let stepper = SpdeStepper::new(basis, model, config)?;
    let mut state = FieldState::from_grid(basis, u0)?;
    let mut streams = NoiseStreams::new(seed, config.noise_modes);
    let mut ladder = LadderState::new(model.c0)?;
    let num_steps = config.num_steps();
    let stride = (num_steps / MAX_SERIES_POINTS).max(1);

    let mut series = Vec::with_capacity(num_steps.min(MAX_SERIES_POINTS) + 2);
    if config.ladder_enabled {
        ladder.update(0.0, state.sup_norm)?;
    }
    series.push(SeriesPoint {
        t: 0.0,
        sup_norm: state.sup_norm,
        level_index: ladder.level_index(),
    });

    let mut verdict = Verdict::SurvivedToHorizon;
    let mut dw = vec![0.0; config.grid_size];
    for step in 1..=num_steps {
        let w = noise_increment_coeffs(spectrum, config.noise_modes, config.dt, &mut streams)?;
        let grid = basis.inverse_transform(&w)?;
        dw.copy_from_slice(&grid);
        stepper.step(&mut state, &dw)?;

        if !state.sup_norm.is_finite() {
            verdict = Verdict::NonFiniteAt { t: state.time };
        } else {
            if config.ladder_enabled {
                ladder.update(state.time, state.sup_norm)?;
            }
            if state.sup_norm >= config.explosion_threshold {
                verdict = Verdict::ExplodedAt { t: state.time };
            }
        }

        let done = !matches!(verdict, Verdict::SurvivedToHorizon);
        if step % stride == 0 || done || step == num_steps {
            series.push(SeriesPoint {
                t: state.time,
                sup_norm: state.sup_norm,
                level_index: ladder.level_index(),
            });
        }
        if done {
            break;
        }
    }

    Ok(TrajectoryRecord {
        seed,
        config_digest: config_digest(model, config, u0),
        series,
        crossings: ladder.into_crossings(),
        verdict,
        wall_secs: start.elapsed().as_secs_f64(),
    })
}
