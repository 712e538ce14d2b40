//! Stochastic convolution, its factorization representation, and empirical
//! validation of the sup-norm moment bounds.
//!
//! The stochastic convolution `Z(t) = ∫0..t S(t−s) σ(u(s)) dW(s)` is
//! computed by left-point Itô quadrature in coefficient space,
//!
//! ```text
//! Z(t_n) = Σ_{m<n} S(t_n − t_{m+1}) [σ(u(t_m)) ⊙ ΔW_m].
//! ```
//!
//! The factorization route goes through the weighted process
//! `Z_α(t) = ∫0..t (t−s)^{−α} S(t−s) σ(u(s)) dW(s)` and reconstructs
//!
//! ```text
//! Z(t) = (sin(πα)/π) ∫0..t (t−s)^{α−1} S(t−s) Z_α(s) ds,
//! ```
//!
//! a deterministic weakly-singular integral evaluated by product
//! integration: the kernel `(t−s)^{α−1}` is integrated exactly on every
//! subinterval and the smooth factor is sampled at the right endpoint.
//!
//! The Z_α quadrature uses the weight `(t_n − t_m)^{−α}` at the left
//! endpoint of each increment, except that the newest few increments carry
//! calibrated *starting weights*: the plain left-endpoint value loses the
//! α-order endpoint behavior that the factorization identity depends on,
//! and the classical remedy is to correct the first few weights so the
//! composed identity is exact at small lags. With [`STARTING_WEIGHT_COUNT`]
//! corrected lags the reconstruction matches the direct computation to
//! below one percent at desk-scale resolutions. The first corrected weight
//! is `Γ(1+α)Γ(1−α)·dt^{−α}`.

use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::noise::NoiseSpectrum;
use crate::rng::{trial_seed, NoiseStreams};
use crate::spectral::SpectralBasis;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Number of calibrated starting weights in the Z_α quadrature.
pub const STARTING_WEIGHT_COUNT: usize = 5;

/// Parameter window for the factorization experiments (spatial dimension is
/// one throughout).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionConfig {
    /// Factorization exponent, in (0, (1−η)/2).
    pub alpha: f64,
    /// Sobolev-embedding exponent, in (0, 2α).
    pub zeta: f64,
    /// Moment order, ≥ 2 and > max{1/ζ, 1/(α − ζ/2)}.
    pub p: f64,
    /// Quadrature time step.
    pub dt: f64,
    /// Number of time steps.
    pub steps: usize,
}

impl ConvolutionConfig {
    /// Window for the Z̃_α moment bound: α ∈ (0, (1−η)/2) and p ≥ 2.
    pub fn validate(&self, eta: f64) -> Result<()> {
        check_alpha(self.alpha, eta)?;
        if !(self.p >= 2.0) {
            return Err(Error::invalid(format!("p must be >= 2, got {}", self.p)));
        }
        if !(self.dt > 0.0) || self.steps == 0 {
            return Err(Error::invalid("need dt > 0 and at least one step"));
        }
        Ok(())
    }

    /// Stricter window for the sup-moment embedding route: additionally
    /// ζ ∈ (0, 2α) and p > max{d/ζ, 1/(α − ζ/2)} (d = 1 here). The plain
    /// moment bound needs only [`validate`]; p = 2 is admissible there but
    /// never here.
    pub fn validate_embedding(&self, eta: f64) -> Result<()> {
        self.validate(eta)?;
        if !(self.zeta > 0.0 && self.zeta < 2.0 * self.alpha) {
            return Err(Error::invalid(format!(
                "zeta must lie in (0, 2 alpha) = (0, {}), got {}",
                2.0 * self.alpha,
                self.zeta
            )));
        }
        let p_min = (1.0 / self.zeta).max(1.0 / (self.alpha - self.zeta / 2.0));
        if !(self.p > p_min) {
            return Err(Error::invalid(format!(
                "p must exceed max{{d/zeta, 1/(alpha - zeta/2)}} = {p_min}, got {}",
                self.p
            )));
        }
        Ok(())
    }
}

fn check_alpha(alpha: f64, eta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < (1.0 - eta) / 2.0) {
        return Err(Error::invalid(format!(
            "alpha must lie in (0, (1 - eta)/2) = (0, {}), got {alpha}",
            (1.0 - eta) / 2.0
        )));
    }
    Ok(())
}

/// π/sin(π(2α+η)), the value of the Beta-type integral
/// ∫0..t (t−s)^{−2α−η} s^{−(1−2α−η)} ds, which does not depend on t.
pub fn beta_constant(alpha: f64, eta: f64) -> Result<f64> {
    let a = 2.0 * alpha + eta;
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::invalid(format!(
            "2 alpha + eta must lie in (0, 1), got {a}"
        )));
    }
    Ok(PI / (PI * a).sin())
}

/// A replayable batch of noise increments in coefficient space:
/// `increments[m][k]` is the k-th coefficient of ΔW over `[t_m, t_{m+1}]`,
/// i.e. λ_{k+1}·√dt·ξ for driven modes and zero beyond `noise_modes`.
/// Sampling order matches the field solver, so a shared seed replays the
/// same realization.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledNoise {
    pub dt: f64,
    pub increments: Vec<Vec<f64>>,
}

pub fn sample_noise_increments(
    spectrum: &NoiseSpectrum,
    basis: &SpectralBasis,
    noise_modes: usize,
    dt: f64,
    steps: usize,
    seed: u64,
) -> Result<SampledNoise> {
    if noise_modes == 0 || noise_modes > basis.num_modes() {
        return Err(Error::invalid(format!(
            "noise_modes must be in 1..={}, got {noise_modes}",
            basis.num_modes()
        )));
    }
    if !(dt > 0.0) {
        return Err(Error::invalid("dt must be positive"));
    }
    let mut streams = NoiseStreams::new(seed, noise_modes);
    let mut xi = vec![0.0; noise_modes];
    let sqrt_dt = dt.sqrt();
    let increments = (0..steps)
        .map(|_| {
            streams.sample_step(&mut xi);
            let mut w = vec![0.0; basis.num_modes()];
            for (j, slot) in w.iter_mut().take(noise_modes).enumerate() {
                *slot = spectrum.lambda(j + 1) * sqrt_dt * xi[j];
            }
            w
        })
        .collect();
    Ok(SampledNoise { dt, increments })
}

fn check_paths(
    basis: &SpectralBasis,
    sigma_path: &[Vec<f64>],
    noise: &SampledNoise,
) -> Result<()> {
    let steps = noise.increments.len();
    if sigma_path.len() < steps {
        return Err(Error::SizeMismatch {
            what: "sigma path (one field per increment)",
            expected: steps,
            actual: sigma_path.len(),
        });
    }
    for field in sigma_path.iter().take(steps) {
        if field.len() != basis.grid_size() {
            return Err(Error::SizeMismatch {
                what: "sigma field",
                expected: basis.grid_size(),
                actual: field.len(),
            });
        }
    }
    for w in &noise.increments {
        if w.len() != basis.num_modes() {
            return Err(Error::SizeMismatch {
                what: "noise increment coefficients",
                expected: basis.num_modes(),
                actual: w.len(),
            });
        }
    }
    Ok(())
}

/// Coefficient-space fields ṽ_m = transform(σ(t_m) ⊙ ΔW_m).
fn modulated_increments(
    basis: &SpectralBasis,
    sigma_path: &[Vec<f64>],
    noise: &SampledNoise,
    cutoff: Option<&[bool]>,
) -> Result<Vec<Vec<f64>>> {
    let steps = noise.increments.len();
    if let Some(c) = cutoff {
        if c.len() < steps {
            return Err(Error::SizeMismatch {
                what: "cutoff indicator",
                expected: steps,
                actual: c.len(),
            });
        }
    }
    (0..steps)
        .map(|m| {
            if cutoff.is_some_and(|c| !c[m]) {
                return Ok(vec![0.0; basis.num_modes()]);
            }
            let dw = basis.inverse_transform(&noise.increments[m])?;
            let modulated: Vec<f64> = sigma_path[m]
                .iter()
                .zip(&dw)
                .map(|(s, g)| s * g)
                .collect();
            basis.forward_transform(&modulated)
        })
        .collect()
}

/// Direct left-point Itô quadrature of the stochastic convolution; returns
/// the grid-valued path Z(t_0), …, Z(t_n) with Z(0) = 0.
pub fn stochastic_convolution_direct(
    sigma_path: &[Vec<f64>],
    basis: &SpectralBasis,
    noise: &SampledNoise,
) -> Result<Vec<Vec<f64>>> {
    check_paths(basis, sigma_path, noise)?;
    let steps = noise.increments.len();
    let decay = basis.decay_factors(noise.dt)?;
    let modulated = modulated_increments(basis, sigma_path, noise, None)?;

    let mut out = Vec::with_capacity(steps + 1);
    out.push(vec![0.0; basis.grid_size()]);
    let mut zc = vec![0.0; basis.num_modes()];
    for v in modulated.iter() {
        for ((z, d), w) in zc.iter_mut().zip(&decay).zip(v) {
            *z = *z * d + w;
        }
        out.push(basis.inverse_transform(&zc)?);
    }
    Ok(out)
}

/// Quadrature weights of the Z_α sum by lag (1-based): calibrated starting
/// weights for the newest `STARTING_WEIGHT_COUNT` lags, the left-endpoint
/// value `(lag·dt)^{−α}` beyond. Exposed for tests.
pub fn z_alpha_weights(alpha: f64, dt: f64, max_lag: usize) -> Vec<f64> {
    let m0 = STARTING_WEIGHT_COUNT.min(max_lag);
    let s_pi = (PI * alpha).sin() / PI;
    let q = |i: usize| (((i + 1) as f64).powf(alpha) - (i as f64).powf(alpha)) / alpha;
    let mut omega = vec![0.0; m0 + 1];
    for lag in 1..=m0 {
        let acc: f64 = (1..lag).map(|j| q(lag - j) * omega[j]).sum();
        omega[lag] = (1.0 / s_pi - acc) / q(0);
    }
    let scale = dt.powf(-alpha);
    (1..=max_lag)
        .map(|lag| {
            if lag <= m0 {
                omega[lag] * scale
            } else {
                (lag as f64).powf(-alpha) * scale
            }
        })
        .collect()
}

/// The weighted process Z_α (or its stopped variant Z̃_α when a cutoff
/// indicator is supplied: increments with `cutoff[m] == false` are dropped,
/// which realizes σ(u(s))·1_{s ≤ τ}).
pub fn z_alpha_path(
    sigma_path: &[Vec<f64>],
    basis: &SpectralBasis,
    spectrum: &NoiseSpectrum,
    alpha: f64,
    noise: &SampledNoise,
    cutoff: Option<&[bool]>,
) -> Result<Vec<Vec<f64>>> {
    check_alpha(alpha, spectrum.eta_raw())?;
    check_paths(basis, sigma_path, noise)?;
    let steps = noise.increments.len();
    let n_modes = basis.num_modes();
    let modulated = modulated_increments(basis, sigma_path, noise, cutoff)?;
    let weights = z_alpha_weights(alpha, noise.dt, steps);
    let decay_pow = decay_table(basis, noise.dt, steps)?;

    let mut out = Vec::with_capacity(steps + 1);
    out.push(vec![0.0; basis.grid_size()]);
    let mut acc = vec![0.0; n_modes];
    for l in 1..=steps {
        acc.iter_mut().for_each(|a| *a = 0.0);
        for (m, v) in modulated.iter().enumerate().take(l) {
            let lag = l - m;
            let w = weights[lag - 1];
            let damp = &decay_pow[lag - 1];
            for ((a, d), x) in acc.iter_mut().zip(damp).zip(v) {
                *a += w * d * x;
            }
        }
        out.push(basis.inverse_transform(&acc)?);
    }
    Ok(out)
}

/// `decay_pow[i][k] = exp(−α_k · i · dt)`.
fn decay_table(basis: &SpectralBasis, dt: f64, steps: usize) -> Result<Vec<Vec<f64>>> {
    let one = basis.decay_factors(dt)?;
    let mut table = Vec::with_capacity(steps);
    let mut cur = vec![1.0; basis.num_modes()];
    for _ in 0..steps {
        table.push(cur.clone());
        for (c, d) in cur.iter_mut().zip(&one) {
            *c *= d;
        }
    }
    Ok(table)
}

/// Quadrature rule for the reconstruction integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadratureRule {
    /// Exact moments of `(t−s)^{α−1}` on every subinterval (the default).
    ProductIntegration,
    /// Plain rectangle rule with the kernel sampled at subinterval right
    /// endpoints. Loses the α-order endpoint behavior; kept for
    /// demonstrating why the singular kernel needs product integration.
    NaiveRectangle,
}

/// Product-integration reconstruction of Z from the Z_α path:
/// `(sin(πα)/π)·Σ_l [(t_n−t_{l−1})^α − (t_n−t_l)^α]/α · S(t_n−t_l) Z_α(t_l)`.
pub fn factorization_reconstruct(
    z_alpha: &[Vec<f64>],
    basis: &SpectralBasis,
    alpha: f64,
    dt: f64,
) -> Result<Vec<Vec<f64>>> {
    factorization_reconstruct_with(z_alpha, basis, alpha, dt, QuadratureRule::ProductIntegration)
}

/// [`factorization_reconstruct`] with an explicit quadrature rule.
#[allow(clippy::needless_range_loop)] // l, n are time indices of the quadrature
pub fn factorization_reconstruct_with(
    z_alpha: &[Vec<f64>],
    basis: &SpectralBasis,
    alpha: f64,
    dt: f64,
    rule: QuadratureRule,
) -> Result<Vec<Vec<f64>>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if z_alpha.is_empty() {
        return Err(Error::invalid("empty Z_alpha path"));
    }
    if !(dt > 0.0) {
        return Err(Error::invalid("dt must be positive"));
    }
    let steps = z_alpha.len() - 1;
    let za_coeffs: Vec<Vec<f64>> = z_alpha
        .iter()
        .map(|field| basis.forward_transform(field))
        .collect::<Result<_>>()?;
    let decay_pow = decay_table(basis, dt, steps.max(1))?;
    let s_pi = (PI * alpha).sin() / PI;
    let n_modes = basis.num_modes();

    let mut out = Vec::with_capacity(steps + 1);
    out.push(vec![0.0; basis.grid_size()]);
    let mut acc = vec![0.0; n_modes];
    for n in 1..=steps {
        acc.iter_mut().for_each(|a| *a = 0.0);
        for l in 1..=n {
            let i = n - l;
            let q = match rule {
                // exact kernel moment over [t_{l-1}, t_l]
                QuadratureRule::ProductIntegration => {
                    (((i + 1) as f64).powf(alpha) - (i as f64).powf(alpha)) * dt.powf(alpha)
                        / alpha
                }
                // (t_n - t_l)^(alpha-1) * dt, infinite at l = n: clamp the
                // singular sample to the left endpoint value
                QuadratureRule::NaiveRectangle => {
                    let tau = (i.max(1)) as f64 * dt;
                    tau.powf(alpha - 1.0) * dt
                }
            };
            let damp = &decay_pow[i];
            let z = &za_coeffs[l];
            for ((a, d), x) in acc.iter_mut().zip(damp).zip(z) {
                *a += q * d * x;
            }
        }
        let scaled: Vec<f64> = acc.iter().map(|a| s_pi * a).collect();
        out.push(basis.inverse_transform(&scaled)?);
    }
    Ok(out)
}

/// One row of the moment-bound experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentBoundPoint {
    pub t: f64,
    /// Monte Carlo estimate of E|Z̃_α(t)|^p over the grid.
    pub lhs: f64,
    /// Deterministic quadrature of the right-hand side (without the unknown
    /// constant).
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentBoundReport {
    pub points: Vec<MomentBoundPoint>,
}

impl MomentBoundReport {
    pub fn max_ratio(&self) -> f64 {
        self.points.iter().map(|p| p.ratio).fold(0.0, f64::max)
    }
}

/// Monte Carlo check of the Z̃_α moment bound: estimates E|Z̃_α(t)|^p_{L^p}
/// over independent replays and divides by the deterministic quadrature of
/// `(∫0..t (t−s)^{−η−2α} |σ(u(s))|_∞² ds)^{p/2}` built from the supplied
/// driving sup-norm path. The ratio series exhibits the boundedness the
/// estimate asserts (its absolute scale is the unknown constant).
#[allow(clippy::needless_range_loop)] // n is the output-time index
pub fn moment_bound_check(
    config: &ConvolutionConfig,
    model: &ModelSpec,
    spectrum: &NoiseSpectrum,
    basis: &SpectralBasis,
    sup_path: &[f64],
    trials: usize,
    master_seed: u64,
) -> Result<MomentBoundReport> {
    let eta = spectrum.eta_raw();
    config.validate(eta)?;
    if trials < 100 {
        return Err(Error::invalid(format!(
            "need at least 100 trials, got {trials}"
        )));
    }
    let steps = config.steps;
    if sup_path.len() < steps {
        return Err(Error::SizeMismatch {
            what: "driving sup-norm path",
            expected: steps,
            actual: sup_path.len(),
        });
    }
    let sigma_vals: Vec<f64> = sup_path[..steps]
        .iter()
        .map(|&s| model.sigma_eval(s))
        .collect();
    let sigma_path: Vec<Vec<f64>> = sigma_vals
        .iter()
        .map(|&s| vec![s; basis.grid_size()])
        .collect();

    // lhs: mean over trials of the grid L^p norm to the p-th power
    let h = basis.quad_weight();
    let p = config.p;
    let sums: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let noise = sample_noise_increments(
                spectrum,
                basis,
                basis.num_modes(),
                config.dt,
                steps,
                trial_seed(master_seed, i),
            )
            .expect("validated above");
            let za = z_alpha_path(&sigma_path, basis, spectrum, config.alpha, &noise, None)
                .expect("validated above");
            za.iter()
                .map(|field| h * field.iter().map(|v| v.abs().powf(p)).sum::<f64>())
                .collect()
        })
        .collect();
    let mut lhs = vec![0.0; steps + 1];
    for trial in &sums {
        for (acc, v) in lhs.iter_mut().zip(trial) {
            *acc += v;
        }
    }
    for v in &mut lhs {
        *v /= trials as f64;
    }

    // rhs: exact per-subinterval moments of the singular kernel
    let e = 1.0 - eta - 2.0 * config.alpha; // positive inside the window
    let dt = config.dt;
    let mut points = Vec::with_capacity(steps + 1);
    points.push(MomentBoundPoint {
        t: 0.0,
        lhs: 0.0,
        rhs: 0.0,
        ratio: 0.0,
    });
    for n in 1..=steps {
        let t_n = n as f64 * dt;
        let mut integral = 0.0;
        for (m, sv) in sigma_vals.iter().enumerate().take(n) {
            let a = t_n - m as f64 * dt;
            let b = t_n - (m + 1) as f64 * dt;
            integral += sv * sv * (a.powf(e) - b.powf(e)) / e;
        }
        let rhs = integral.powf(p / 2.0);
        let ratio = if rhs > 0.0 { lhs[n] / rhs } else { 0.0 };
        points.push(MomentBoundPoint {
            t: t_n,
            lhs: lhs[n],
            rhs,
            ratio,
        });
    }
    Ok(MomentBoundReport { points })
}

/// Log-log fit of E sup_{[0,t]} sup_x |Z|^p against `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    /// 95% half-width of the slope, propagated from the Monte Carlo
    /// standard errors of the per-horizon moments (delta method); shrinks
    /// like 1/sqrt(trials).
    pub ci_half_width: f64,
    /// The bound's exponent p(α − ζ/2); the empirical slope should not
    /// exceed it (the bound is an upper bound, not an equality).
    pub theoretical_slope: f64,
    pub log_t: Vec<f64>,
    pub log_moment: Vec<f64>,
}

/// Estimates E sup_{s≤t} sup_x |Z(s,x)|^p for σ ≡ 1 across a ladder of
/// horizons and fits the log-log slope.
pub fn sup_moment_scaling(
    config: &ConvolutionConfig,
    spectrum: &NoiseSpectrum,
    basis: &SpectralBasis,
    trials: usize,
    horizons: &[f64],
    master_seed: u64,
) -> Result<ScalingFit> {
    config.validate_embedding(spectrum.eta_raw())?;
    if horizons.len() < 4 {
        return Err(Error::invalid(format!(
            "need a ladder of at least 4 horizons, got {}",
            horizons.len()
        )));
    }
    if horizons.windows(2).any(|w| w[1] <= w[0]) || horizons[0] <= 0.0 {
        return Err(Error::invalid("horizons must be positive and increasing"));
    }
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    let dt = config.dt;
    let t_max = *horizons.last().unwrap();
    let steps = (t_max / dt).ceil() as usize;
    let horizon_steps: Vec<usize> = horizons
        .iter()
        .map(|&t| ((t / dt).round() as usize).clamp(1, steps))
        .collect();
    let sigma_path: Vec<Vec<f64>> = vec![vec![1.0; basis.grid_size()]; steps];

    let per_trial: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let noise = sample_noise_increments(
                spectrum,
                basis,
                basis.num_modes(),
                dt,
                steps,
                trial_seed(master_seed, i),
            )
            .expect("validated above");
            let z = stochastic_convolution_direct(&sigma_path, basis, &noise)
                .expect("validated above");
            let mut running = 0.0f64;
            let mut idx = 0;
            let mut sup_p = vec![0.0; horizon_steps.len()];
            for (n, field) in z.iter().enumerate() {
                let s = field.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
                running = running.max(s);
                while idx < horizon_steps.len() && n == horizon_steps[idx] {
                    sup_p[idx] = running.powf(config.p);
                    idx += 1;
                }
            }
            sup_p
        })
        .collect();

    let log_t: Vec<f64> = horizon_steps.iter().map(|&n| (n as f64 * dt).ln()).collect();
    let mut log_moment = Vec::with_capacity(horizon_steps.len());
    let mut log_moment_var = Vec::with_capacity(horizon_steps.len());
    for j in 0..horizon_steps.len() {
        let mean = per_trial.iter().map(|v| v[j]).sum::<f64>() / trials as f64;
        let var = per_trial
            .iter()
            .map(|v| (v[j] - mean) * (v[j] - mean))
            .sum::<f64>()
            / (trials as f64 - 1.0).max(1.0);
        log_moment.push(mean.ln());
        // delta method: Var(ln mean) ~ Var(mean) / mean^2
        log_moment_var.push(var / (trials as f64 * mean * mean));
    }
    let (slope, se) = ols_slope_with_point_noise(&log_t, &log_moment, &log_moment_var);
    Ok(ScalingFit {
        slope,
        ci_half_width: 1.96 * se,
        theoretical_slope: config.p * (config.alpha - config.zeta / 2.0),
        log_t,
        log_moment,
    })
}

/// OLS slope; the standard error propagates the supplied per-point noise
/// variances through the OLS weights.
fn ols_slope_with_point_noise(x: &[f64], y: &[f64], var_y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let se2: f64 = x
        .iter()
        .zip(var_y)
        .map(|(a, v)| {
            let c = (a - mx) / sxx;
            c * c * v
        })
        .sum();
    (slope, se2.sqrt())
}
