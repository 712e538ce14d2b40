//! srde-lab: a simulation laboratory for stochastic reaction-diffusion
//! equations with strongly dissipative drift and super-linear multiplicative
//! noise.
//!
//! The lab simulates the 1-D stochastic heat equation
//!
//! ```text
//! ∂u/∂t = 𝒜u + f(u) + σ(u) Ẇ,   u = 0 on the boundary,
//! ```
//!
//! with `f(u) = −K1·|u|^{β−1}u` (or zero) and `σ(u) = K2(1 + |u|^γ)` (or a
//! constant), driven by spectrally expanded Gaussian noise, and maps where
//! trajectories blow up in finite time against the analytic exponent
//! thresholds that separate the explosive from the dissipative regime:
//!
//! * the finite-dimensional Itô line γ < (β+1)/2,
//! * the operator/noise-balance line γ < 1 + (1−η)(β−1)/2,
//! * the combined line γ < max{3/2, (3+β)/4} for white noise on an interval.
//!
//! Modules: [`spectral`] (eigenbasis, semigroup, transforms), [`noise`]
//! (mode amplitudes and the balance constant η), [`assumptions`]
//! (summability checks), [`model`] (drift/diffusion), [`ode`] (closed-form
//! decay oracles), [`sde`] (finite-dimensional comparison SDE), [`spde`]
//! (the field solver with sup-norm tracking), [`ladder`] (the tripling
//! stopping-time ladder), [`convolution`] (stochastic convolution and its
//! factorization representation), [`harness`] (Monte Carlo sweeps and
//! persistence), [`config`] (flat-file configuration) and [`cli`].

// validation guards are written `!(x > 0.0)` on purpose: the negation
// rejects NaN along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assumptions;
pub mod cli;
pub mod config;
pub mod convolution;
pub mod error;
pub mod harness;
pub mod ladder;
pub mod model;
pub mod noise;
pub mod ode;
pub mod rng;
pub mod sde;
pub mod spde;
pub mod spectral;

pub use assumptions::{check_assumptions, AssumptionReport, SumOutcome};
pub use config::RunConfig;
pub use convolution::{
    beta_constant, factorization_reconstruct, moment_bound_check, sample_noise_increments,
    stochastic_convolution_direct, sup_moment_scaling, z_alpha_path, ConvolutionConfig,
};
pub use error::{Error, Result};
pub use harness::{
    classify_cell, estimate_explosion_probability, persist_results, run_sweep, wilson_interval,
    CellResult, ExplosionMap, SweepSpec, WilsonInterval,
};
pub use ladder::{Crossing, CrossingDirection, LadderState};
pub use model::{DiffusionKind, DriftKind, ModelSpec};
pub use noise::{LambdaKind, NoiseSpectrum};
pub use ode::{decay_envelope, exact_solution, uniform_bound};
pub use sde::{
    ito_condition, moment_estimate, sde_step, simulate_sde_path, SdeConfig, SdeScheme,
};
pub use spde::{
    noise_increment, simulate_spde, spde_step, FieldState, SolverConfig, SpdeScheme,
    SpdeStepper, TrajectoryRecord, Verdict,
};
pub use spectral::{BasisKind, SpectralBasis};
