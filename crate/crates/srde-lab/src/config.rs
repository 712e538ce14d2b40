//! Flat key-value run configuration.
//!
//! The file format is one `key = value` pair per line, `#` comments, keys
//! exactly as listed in [`RunConfig::SCHEMA`]. Unknown keys are hard
//! errors; malformed values report the offending key and the expected
//! type. Every key has a default, so the empty file is a valid
//! configuration. `save` followed by `load` reproduces the struct field
//! for field (floats are written in shortest round-trip form).

use crate::convolution::ConvolutionConfig;
use crate::error::{Error, Result};
use crate::model::{DiffusionKind, DriftKind, ModelSpec};
use crate::noise::{LambdaKind, NoiseSpectrum};
use crate::rng::StableHasher;
use crate::sde::{SdeConfig, SdeScheme};
use crate::spde::{SolverConfig, SpdeScheme};
use crate::spectral::SpectralBasis;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    // spectral basis
    pub domain_length: f64,
    pub num_modes: usize,
    /// 0 = auto (4 × num_modes).
    pub grid_size: usize,
    /// 0 = auto (num_modes).
    pub noise_modes: usize,
    // noise spectrum
    pub lambda: String,
    pub lambda_delta: f64,
    pub lambda_csv: String,
    pub rho: f64,
    pub theta: f64,
    // model
    pub beta: f64,
    pub gamma: f64,
    pub k1: f64,
    pub k2: f64,
    pub c0: f64,
    pub drift: String,
    pub diffusion: String,
    // solver
    pub dt: f64,
    pub horizon: f64,
    /// 0 = auto (1e6 × c0).
    pub explosion_threshold: f64,
    pub scheme: String,
    pub ladder_enabled: bool,
    // initial data u0 = amplitude · sin(mode · π x / L)
    pub u0_amplitude: f64,
    pub u0_mode: usize,
    // finite-dimensional SDE
    pub dimension: usize,
    pub exit_radius: f64,
    pub sde_scheme: String,
    pub x0: Vec<f64>,
    // convolution lab
    pub alpha: f64,
    pub zeta: f64,
    pub p_moment: f64,
    // sweep
    pub betas: Vec<f64>,
    pub gammas: Vec<f64>,
    pub trials: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            domain_length: std::f64::consts::PI,
            num_modes: 32,
            grid_size: 0,
            noise_modes: 0,
            lambda: "white".into(),
            lambda_delta: 2.0,
            lambda_csv: String::new(),
            rho: f64::INFINITY,
            theta: 0.6,
            beta: 3.0,
            gamma: 1.5,
            k1: 1.0,
            k2: 1.0,
            c0: 1.0,
            drift: "power_dissipative".into(),
            diffusion: "polynomial".into(),
            dt: 2.5e-4,
            horizon: 1.0,
            explosion_threshold: 0.0,
            scheme: "semi_implicit_split".into(),
            ladder_enabled: true,
            u0_amplitude: 5.0,
            u0_mode: 1,
            dimension: 1,
            exit_radius: 1e3,
            sde_scheme: "tamed_euler".into(),
            x0: vec![0.0],
            alpha: 0.15,
            zeta: 0.1,
            p_moment: 12.0,
            betas: vec![2.0, 3.0, 4.0, 5.0, 6.0],
            gammas: vec![1.2, 1.5, 1.8, 2.0],
            trials: 200,
        }
    }
}

/// `(key, type description)` pairs of the schema, in file order.
const SCHEMA: &[(&str, &str)] = &[
    ("domain_length", "positive real"),
    ("num_modes", "positive integer"),
    ("grid_size", "integer (0 = auto: 4*num_modes)"),
    ("noise_modes", "integer (0 = auto: num_modes)"),
    ("lambda", "white | power_law | csv"),
    ("lambda_delta", "real (power-law exponent)"),
    ("lambda_csv", "path to two-column CSV (index, lambda)"),
    ("rho", "real in [2, inf] or `inf`"),
    ("theta", "positive real"),
    ("beta", "real > 1"),
    ("gamma", "nonnegative real"),
    ("k1", "positive real"),
    ("k2", "positive real"),
    ("c0", "positive real"),
    ("drift", "power_dissipative | zero"),
    ("diffusion", "polynomial | additive"),
    ("dt", "positive real"),
    ("horizon", "positive real"),
    ("explosion_threshold", "real (0 = auto: 1e6*c0)"),
    ("scheme", "semi_implicit_split | exponential_tamed"),
    ("ladder_enabled", "true | false"),
    ("u0_amplitude", "real"),
    ("u0_mode", "positive integer"),
    ("dimension", "positive integer"),
    ("exit_radius", "positive real"),
    ("sde_scheme", "tamed_euler | euler_maruyama"),
    ("x0", "comma-separated reals"),
    ("alpha", "real in (0, (1-eta)/2)"),
    ("zeta", "real in (0, 2*alpha)"),
    ("p_moment", "real >= 2"),
    ("betas", "comma-separated increasing reals"),
    ("gammas", "comma-separated increasing reals"),
    ("trials", "positive integer"),
];

fn parse_f64(key: &str, value: &str, expected: &str) -> Result<f64> {
    if value.eq_ignore_ascii_case("inf") || value.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    value
        .parse()
        .map_err(|_| Error::config(key, format!("expected {expected}, got `{value}`")))
}

fn parse_usize(key: &str, value: &str, expected: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| Error::config(key, format!("expected {expected}, got `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::config(
            key,
            format!("expected true | false, got `{value}`"),
        )),
    }
}

fn parse_list(key: &str, value: &str, expected: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::config(key, format!("expected {expected}, got `{value}`")))
        })
        .collect()
}

fn fmt_list(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v}")
    }
}

impl RunConfig {
    pub fn schema() -> &'static [(&'static str, &'static str)] {
        SCHEMA
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let expected = SCHEMA
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, t)| *t)
            .ok_or_else(|| Error::config(key, "unknown key"))?;
        match key {
            "domain_length" => self.domain_length = parse_f64(key, value, expected)?,
            "num_modes" => self.num_modes = parse_usize(key, value, expected)?,
            "grid_size" => self.grid_size = parse_usize(key, value, expected)?,
            "noise_modes" => self.noise_modes = parse_usize(key, value, expected)?,
            "lambda" => {
                if !matches!(value, "white" | "power_law" | "csv") {
                    return Err(Error::config(key, format!("expected {expected}, got `{value}`")));
                }
                self.lambda = value.into();
            }
            "lambda_delta" => self.lambda_delta = parse_f64(key, value, expected)?,
            "lambda_csv" => self.lambda_csv = value.into(),
            "rho" => self.rho = parse_f64(key, value, expected)?,
            "theta" => self.theta = parse_f64(key, value, expected)?,
            "beta" => self.beta = parse_f64(key, value, expected)?,
            "gamma" => self.gamma = parse_f64(key, value, expected)?,
            "k1" => self.k1 = parse_f64(key, value, expected)?,
            "k2" => self.k2 = parse_f64(key, value, expected)?,
            "c0" => self.c0 = parse_f64(key, value, expected)?,
            "drift" => {
                if !matches!(value, "power_dissipative" | "zero") {
                    return Err(Error::config(key, format!("expected {expected}, got `{value}`")));
                }
                self.drift = value.into();
            }
            "diffusion" => {
                if !matches!(value, "polynomial" | "additive") {
                    return Err(Error::config(key, format!("expected {expected}, got `{value}`")));
                }
                self.diffusion = value.into();
            }
            "dt" => self.dt = parse_f64(key, value, expected)?,
            "horizon" => self.horizon = parse_f64(key, value, expected)?,
            "explosion_threshold" => self.explosion_threshold = parse_f64(key, value, expected)?,
            "scheme" => {
                if !matches!(value, "semi_implicit_split" | "exponential_tamed") {
                    return Err(Error::config(key, format!("expected {expected}, got `{value}`")));
                }
                self.scheme = value.into();
            }
            "ladder_enabled" => self.ladder_enabled = parse_bool(key, value)?,
            "u0_amplitude" => self.u0_amplitude = parse_f64(key, value, expected)?,
            "u0_mode" => self.u0_mode = parse_usize(key, value, expected)?,
            "dimension" => self.dimension = parse_usize(key, value, expected)?,
            "exit_radius" => self.exit_radius = parse_f64(key, value, expected)?,
            "sde_scheme" => {
                if !matches!(value, "tamed_euler" | "euler_maruyama") {
                    return Err(Error::config(key, format!("expected {expected}, got `{value}`")));
                }
                self.sde_scheme = value.into();
            }
            "x0" => self.x0 = parse_list(key, value, expected)?,
            "alpha" => self.alpha = parse_f64(key, value, expected)?,
            "zeta" => self.zeta = parse_f64(key, value, expected)?,
            "p_moment" => self.p_moment = parse_f64(key, value, expected)?,
            "betas" => self.betas = parse_list(key, value, expected)?,
            "gammas" => self.gammas = parse_list(key, value, expected)?,
            "trials" => self.trials = parse_usize(key, value, expected)?,
            _ => unreachable!("schema covered above"),
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(
                    format!("line {}", lineno + 1),
                    format!("expected `key = value`, got `{line}`"),
                )
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render())?;
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# srde-lab run configuration");
        let _ = writeln!(s, "domain_length = {}", fmt_f64(self.domain_length));
        let _ = writeln!(s, "num_modes = {}", self.num_modes);
        let _ = writeln!(s, "grid_size = {}", self.grid_size);
        let _ = writeln!(s, "noise_modes = {}", self.noise_modes);
        let _ = writeln!(s, "lambda = {}", self.lambda);
        let _ = writeln!(s, "lambda_delta = {}", fmt_f64(self.lambda_delta));
        if !self.lambda_csv.is_empty() {
            let _ = writeln!(s, "lambda_csv = {}", self.lambda_csv);
        }
        let _ = writeln!(s, "rho = {}", fmt_f64(self.rho));
        let _ = writeln!(s, "theta = {}", fmt_f64(self.theta));
        let _ = writeln!(s, "beta = {}", fmt_f64(self.beta));
        let _ = writeln!(s, "gamma = {}", fmt_f64(self.gamma));
        let _ = writeln!(s, "k1 = {}", fmt_f64(self.k1));
        let _ = writeln!(s, "k2 = {}", fmt_f64(self.k2));
        let _ = writeln!(s, "c0 = {}", fmt_f64(self.c0));
        let _ = writeln!(s, "drift = {}", self.drift);
        let _ = writeln!(s, "diffusion = {}", self.diffusion);
        let _ = writeln!(s, "dt = {}", fmt_f64(self.dt));
        let _ = writeln!(s, "horizon = {}", fmt_f64(self.horizon));
        let _ = writeln!(s, "explosion_threshold = {}", fmt_f64(self.explosion_threshold));
        let _ = writeln!(s, "scheme = {}", self.scheme);
        let _ = writeln!(s, "ladder_enabled = {}", self.ladder_enabled);
        let _ = writeln!(s, "u0_amplitude = {}", fmt_f64(self.u0_amplitude));
        let _ = writeln!(s, "u0_mode = {}", self.u0_mode);
        let _ = writeln!(s, "dimension = {}", self.dimension);
        let _ = writeln!(s, "exit_radius = {}", fmt_f64(self.exit_radius));
        let _ = writeln!(s, "sde_scheme = {}", self.sde_scheme);
        let _ = writeln!(s, "x0 = {}", fmt_list(&self.x0));
        let _ = writeln!(s, "alpha = {}", fmt_f64(self.alpha));
        let _ = writeln!(s, "zeta = {}", fmt_f64(self.zeta));
        let _ = writeln!(s, "p_moment = {}", fmt_f64(self.p_moment));
        let _ = writeln!(s, "betas = {}", fmt_list(&self.betas));
        let _ = writeln!(s, "gammas = {}", fmt_list(&self.gammas));
        let _ = writeln!(s, "trials = {}", self.trials);
        s
    }

    /// Stable 64-bit digest of the rendered configuration.
    pub fn digest(&self) -> u64 {
        let mut h = StableHasher::new();
        h.write_str(&self.render());
        h.finish()
    }

    pub fn effective_grid_size(&self) -> usize {
        if self.grid_size == 0 {
            4 * self.num_modes
        } else {
            self.grid_size
        }
    }

    pub fn effective_noise_modes(&self) -> usize {
        if self.noise_modes == 0 {
            self.num_modes
        } else {
            self.noise_modes
        }
    }

    pub fn effective_explosion_threshold(&self) -> f64 {
        if self.explosion_threshold == 0.0 {
            1e6 * self.c0
        } else {
            self.explosion_threshold
        }
    }

    pub fn build_basis(&self) -> Result<SpectralBasis> {
        SpectralBasis::dirichlet_interval(
            self.domain_length,
            self.num_modes,
            self.effective_grid_size(),
        )
    }

    /// Resolves the spectrum; `base_dir` anchors a relative `lambda_csv`.
    pub fn build_spectrum(&self, base_dir: Option<&Path>) -> Result<NoiseSpectrum> {
        let kind = match self.lambda.as_str() {
            "white" => LambdaKind::White,
            "power_law" => LambdaKind::PowerLaw {
                delta: self.lambda_delta,
            },
            "csv" => {
                if self.lambda_csv.is_empty() {
                    return Err(Error::config("lambda_csv", "required when lambda = csv"));
                }
                let mut path = PathBuf::from(&self.lambda_csv);
                if path.is_relative() {
                    if let Some(dir) = base_dir {
                        path = dir.join(path);
                    }
                }
                LambdaKind::Table(NoiseSpectrum::lambdas_from_csv(&path)?)
            }
            other => return Err(Error::config("lambda", format!("unknown kind `{other}`"))),
        };
        NoiseSpectrum::new(kind, self.rho, self.theta)
    }

    pub fn build_model(&self) -> Result<ModelSpec> {
        let drift = match self.drift.as_str() {
            "power_dissipative" => DriftKind::PowerDissipative,
            "zero" => DriftKind::Zero,
            other => return Err(Error::config("drift", format!("unknown kind `{other}`"))),
        };
        let diffusion = match self.diffusion.as_str() {
            "polynomial" => DiffusionKind::Polynomial,
            "additive" => DiffusionKind::Additive,
            other => return Err(Error::config("diffusion", format!("unknown kind `{other}`"))),
        };
        ModelSpec::new(self.beta, self.gamma, self.k1, self.k2, self.c0, drift, diffusion)
    }

    pub fn build_solver(&self) -> Result<SolverConfig> {
        let scheme = match self.scheme.as_str() {
            "semi_implicit_split" => SpdeScheme::SemiImplicitSplit,
            "exponential_tamed" => SpdeScheme::ExponentialTamed,
            other => return Err(Error::config("scheme", format!("unknown kind `{other}`"))),
        };
        Ok(SolverConfig {
            num_modes: self.num_modes,
            grid_size: self.effective_grid_size(),
            noise_modes: self.effective_noise_modes(),
            dt: self.dt,
            horizon: self.horizon,
            explosion_threshold: self.effective_explosion_threshold(),
            scheme,
            ladder_enabled: self.ladder_enabled,
        })
    }

    pub fn build_sde(&self) -> Result<SdeConfig> {
        let scheme = match self.sde_scheme.as_str() {
            "tamed_euler" => SdeScheme::TamedEuler,
            "euler_maruyama" => SdeScheme::EulerMaruyama,
            other => return Err(Error::config("sde_scheme", format!("unknown kind `{other}`"))),
        };
        let drift = match self.drift.as_str() {
            "power_dissipative" => DriftKind::PowerDissipative,
            "zero" => DriftKind::Zero,
            other => return Err(Error::config("drift", format!("unknown kind `{other}`"))),
        };
        let mut x0 = self.x0.clone();
        if x0.len() == 1 && self.dimension > 1 {
            x0 = vec![x0[0]; self.dimension];
        }
        Ok(SdeConfig {
            dimension: self.dimension,
            beta: self.beta,
            gamma: self.gamma,
            x0,
            dt: self.dt,
            horizon: self.horizon,
            exit_radius: self.exit_radius,
            scheme,
            drift,
        })
    }

    pub fn build_convolution(&self) -> Result<ConvolutionConfig> {
        Ok(ConvolutionConfig {
            alpha: self.alpha,
            zeta: self.zeta,
            p: self.p_moment,
            dt: self.dt,
            steps: (self.horizon / self.dt).round().max(1.0) as usize,
        })
    }

    /// Initial data `amplitude · sin(mode·πx/L)` sampled on the grid.
    pub fn build_u0(&self, basis: &SpectralBasis) -> Vec<f64> {
        let w = self.u0_mode as f64 * std::f64::consts::PI / self.domain_length;
        basis
            .grid_points()
            .iter()
            .map(|&x| self.u0_amplitude * (w * x).sin())
            .collect()
    }
}
