//! Resolution-stability and bookkeeping invariants of the field solver.

mod common;

use srde_lab::model::{DiffusionKind, DriftKind, ModelSpec};
use srde_lab::noise::NoiseSpectrum;
use srde_lab::rng::NoiseStreams;
use srde_lab::spde::{
    noise_increment_coeffs, simulate_spde, FieldState, SolverConfig, SpdeScheme, SpdeStepper,
};
use srde_lab::spectral::SpectralBasis;

fn pi_basis(n: usize) -> SpectralBasis {
    SpectralBasis::dirichlet_interval(std::f64::consts::PI, n, 4 * n).unwrap()
}

fn sine_u0(basis: &SpectralBasis, amplitude: f64) -> Vec<f64> {
    basis
        .grid_points()
        .iter()
        .map(|&x| amplitude * x.sin())
        .collect()
}

fn config(n: usize, dt: f64, horizon: f64) -> SolverConfig {
    SolverConfig {
        num_modes: n,
        grid_size: 4 * n,
        noise_modes: n,
        dt,
        horizon,
        explosion_threshold: 1e6,
        scheme: SpdeScheme::SemiImplicitSplit,
        ladder_enabled: false,
    }
}

/// Runs the solver manually and returns the sup-norm at every step.
fn sup_series(
    basis: &SpectralBasis,
    model: &ModelSpec,
    cfg: &SolverConfig,
    spectrum: &NoiseSpectrum,
    seed: u64,
    u0: &[f64],
) -> Vec<f64> {
    let stepper = SpdeStepper::new(basis, model, cfg).unwrap();
    let mut streams = NoiseStreams::new(seed, cfg.noise_modes);
    let mut state = FieldState::from_grid(basis, u0).unwrap();
    let mut out = vec![state.sup_norm];
    for _ in 0..cfg.num_steps() {
        let w = noise_increment_coeffs(spectrum, cfg.noise_modes, cfg.dt, &mut streams).unwrap();
        let dw = basis.inverse_transform(&w).unwrap();
        stepper.step(&mut state, &dw).unwrap();
        out.push(state.sup_norm);
    }
    out
}

/// Doubling N and M (shared per-mode noise streams on the common modes)
/// changes the survived-trajectory sup-norm series by less than 1% in the
/// sup metric.
#[test]
fn mode_truncation_stability() {
    let model = ModelSpec::canonical(6.0, 1.5).unwrap();
    let spectrum = NoiseSpectrum::power_law(2.0, 2.0, 1.0).unwrap();
    let seed = 2718;
    let dt = 1e-3;
    let horizon = 0.5;

    let coarse_basis = pi_basis(32);
    let fine_basis = pi_basis(64);
    let coarse = sup_series(
        &coarse_basis,
        &model,
        &config(32, dt, horizon),
        &spectrum,
        seed,
        &sine_u0(&coarse_basis, 5.0),
    );
    let fine = sup_series(
        &fine_basis,
        &model,
        &config(64, dt, horizon),
        &spectrum,
        seed,
        &sine_u0(&fine_basis, 5.0),
    );
    assert_eq!(coarse.len(), fine.len());
    let scale = coarse.iter().fold(0.0f64, |a, &v| a.max(v));
    let max_diff = coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    assert!(
        max_diff / scale < 0.01,
        "N-refinement changed the series by {:.3}%",
        100.0 * max_diff / scale
    );
}

/// Halving dt on the same Brownian path (coarse increments are pairwise
/// sums of the fine ones) changes the sup-norm series by less than 2%.
#[test]
fn dt_refinement_stability() {
    let n = 32;
    let basis = pi_basis(n);
    let model = ModelSpec::canonical(6.0, 1.5).unwrap();
    let spectrum = NoiseSpectrum::power_law(2.0, 2.0, 1.0).unwrap();
    let dt = 1e-3;
    let horizon = 0.5;
    let u0 = sine_u0(&basis, 5.0);

    // fine increments in coefficient space, drawn once
    let fine_cfg = config(n, dt / 2.0, horizon);
    let mut streams = NoiseStreams::new(31415, n);
    let fine_w: Vec<Vec<f64>> = (0..fine_cfg.num_steps())
        .map(|_| noise_increment_coeffs(&spectrum, n, dt / 2.0, &mut streams).unwrap())
        .collect();

    let coarse_cfg = config(n, dt, horizon);
    let stepper_c = SpdeStepper::new(&basis, &model, &coarse_cfg).unwrap();
    let stepper_f = SpdeStepper::new(&basis, &model, &fine_cfg).unwrap();

    let mut state_c = FieldState::from_grid(&basis, &u0).unwrap();
    let mut state_f = FieldState::from_grid(&basis, &u0).unwrap();
    let mut sup_c = vec![state_c.sup_norm];
    let mut sup_f = vec![state_f.sup_norm];
    for m in 0..coarse_cfg.num_steps() {
        let summed: Vec<f64> = fine_w[2 * m]
            .iter()
            .zip(&fine_w[2 * m + 1])
            .map(|(a, b)| a + b)
            .collect();
        let dw = basis.inverse_transform(&summed).unwrap();
        stepper_c.step(&mut state_c, &dw).unwrap();
        sup_c.push(state_c.sup_norm);

        for half in [2 * m, 2 * m + 1] {
            let dw = basis.inverse_transform(&fine_w[half]).unwrap();
            stepper_f.step(&mut state_f, &dw).unwrap();
        }
        sup_f.push(state_f.sup_norm);
    }

    let scale = sup_c.iter().fold(0.0f64, |a, &v| a.max(v));
    let max_diff = sup_c
        .iter()
        .zip(&sup_f)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    assert!(
        max_diff / scale < 0.02,
        "dt-refinement changed the series by {:.3}%",
        100.0 * max_diff / scale
    );
}

/// The ladder updated inside the solver loop agrees exactly with a
/// brute-force crossing scan over the recorded dense series.
#[test]
fn ladder_equivalence_inside_solver() {
    let n = 16;
    let basis = pi_basis(n);
    let model = ModelSpec::new(
        3.0,
        2.0,
        1.0,
        1.0,
        1.0,
        DriftKind::Zero,
        DiffusionKind::Polynomial,
    )
    .unwrap();
    let spectrum = NoiseSpectrum::white(0.6).unwrap();
    let mut cfg = config(n, 2.5e-4, 0.4);
    cfg.ladder_enabled = true;

    let mut checked_with_crossings = 0;
    for seed in 0..12u64 {
        let rec = simulate_spde(&sine_u0(&basis, 5.0), &model, &spectrum, &basis, &cfg, seed)
            .unwrap();
        // the series is dense (1600 steps < the decimation cap)
        let dense: Vec<(f64, f64)> = rec.series.iter().map(|p| (p.t, p.sup_norm)).collect();
        let expected = common::brute_force_crossings(model.c0, &dense);
        assert_eq!(rec.crossings.len(), expected.len(), "seed {seed}");
        for (g, e) in rec.crossings.iter().zip(&expected) {
            assert_eq!(g.time, e.0, "seed {seed}");
            assert_eq!(g.level_index, e.2, "seed {seed}");
        }
        if !rec.crossings.is_empty() {
            checked_with_crossings += 1;
        }
    }
    assert!(
        checked_with_crossings >= 6,
        "too few paths produced crossings ({checked_with_crossings}/12)"
    );
}

/// Along a fixed beta row the estimated explosion probability is
/// nondecreasing in gamma, up to confidence-interval overlap.
#[test]
fn explosion_probability_monotone_in_gamma() {
    let n = 16;
    let basis = pi_basis(n);
    let u0 = sine_u0(&basis, 5.0);
    let spec = srde_lab::harness::SweepSpec {
        betas: vec![3.0],
        gammas: vec![1.2, 1.8, 2.1, 2.4],
        trials_per_cell: 30,
        model_template: ModelSpec::new(
            3.0,
            1.5,
            1.0,
            1.0,
            1.0,
            DriftKind::Zero,
            DiffusionKind::Polynomial,
        )
        .unwrap(),
        solver: SolverConfig {
            num_modes: n,
            grid_size: 4 * n,
            noise_modes: n,
            dt: 5e-4,
            horizon: 0.5,
            explosion_threshold: 1e6,
            scheme: SpdeScheme::SemiImplicitSplit,
            ladder_enabled: false,
        },
        spectrum: NoiseSpectrum::white(0.6).unwrap(),
        basis,
        u0,
        master_seed: 404,
    };
    let map = srde_lab::harness::run_sweep(&spec, None).unwrap();
    for pair in map.cells.windows(2) {
        assert!(
            pair[0].wilson_lo <= pair[1].wilson_hi,
            "explosion probability decreased along gamma: {:?} then {:?}",
            (pair[0].gamma, pair[0].explosions),
            (pair[1].gamma, pair[1].explosions)
        );
    }
    let total: usize = map.cells.iter().map(|c| c.explosions).sum();
    assert!(total > 0, "the gamma row should show explosions at the top");
}

/// The two schemes agree at leading order on a quiet path: with weak noise
/// and moderate data their sup series stay within a few percent.
#[test]
fn schemes_agree_on_quiet_paths() {
    let n = 16;
    let basis = pi_basis(n);
    let model = ModelSpec::new(
        3.0,
        1.2,
        1.0,
        0.1,
        1.0,
        DriftKind::PowerDissipative,
        DiffusionKind::Polynomial,
    )
    .unwrap();
    let spectrum = NoiseSpectrum::power_law(2.0, 2.0, 1.0).unwrap();
    let u0 = sine_u0(&basis, 2.0);
    let mut cfg_split = config(n, 2.5e-4, 0.25);
    cfg_split.noise_modes = n;
    let mut cfg_tamed = cfg_split.clone();
    cfg_tamed.scheme = SpdeScheme::ExponentialTamed;

    let a = sup_series(&basis, &model, &cfg_split, &spectrum, 9, &u0);
    let b = sup_series(&basis, &model, &cfg_tamed, &spectrum, 9, &u0);
    let scale = a.iter().fold(0.0f64, |x, &v| x.max(v));
    let max_diff = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max);
    assert!(
        max_diff / scale < 0.05,
        "schemes diverged by {:.2}%",
        100.0 * max_diff / scale
    );
}
