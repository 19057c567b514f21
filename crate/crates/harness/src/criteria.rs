//! The nine acceptance rows, each runnable on its own.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nsm_core::energy::{EnergyEvaluator, EnergyWeights};
use nsm_core::linalg::matrix_exponential_apply;
use nsm_core::semigroup::{full_generator, propagate_linear_mode};
use nsm_core::solver::{init_compatible, random_smooth_state, rhs};
use nsm_core::spectral::{ScalarField, SpectralGrid, VectorField};
use nsm_core::state::{StateVector, STATE_DIM};
use nsm_core::ModelParams;
use nsm_oracles::{energy_direct, expm_ode_oracle, fd_rhs_oracle, generator_matrix, write_reports_csv, OracleReport};

use crate::config::{ExperimentConfig, Mode};
use crate::error::{HarnessError, Result};
use crate::report::Check;
use crate::run::{execute, Outcome};

pub const ROWS: std::ops::RangeInclusive<usize> = 1..=9;

const ROW_CONFIGS: [(&str, &str); 8] = [
    ("row1_fluid_decay.toml", include_str!("../../../configs/row1_fluid_decay.toml")),
    ("row2_m1_contrast.toml", include_str!("../../../configs/row2_m1_contrast.toml")),
    ("row3_em_decay.toml", include_str!("../../../configs/row3_em_decay.toml")),
    ("row4_full_decay.toml", include_str!("../../../configs/row4_full_decay.toml")),
    ("row5_symbol_bounds.toml", include_str!("../../../configs/row5_symbol_bounds.toml")),
    ("row6_regularity_loss.toml", include_str!("../../../configs/row6_regularity_loss.toml")),
    ("row7_nonlinear_run.toml", include_str!("../../../configs/row7_nonlinear_run.toml")),
    ("row8_consistency.toml", include_str!("../../../configs/row8_consistency.toml")),
];

pub fn title(row: usize) -> &'static str {
    match row {
        1 => "linearized fluid decay",
        2 => "M1 block with and without a density zero mode",
        3 => "electromagnetic decay",
        4 => "combined linearized decay",
        5 => "fluid symbol bounds",
        6 => "regularity-loss rate scaling",
        7 => "nonlinear small-data run",
        8 => "linear-limit consistency",
        9 => "oracle equivalence",
        _ => "unknown row",
    }
}

/// The configuration file behind a row (rows 1 to 8).
pub fn row_config(row: usize) -> Result<(ExperimentConfig, Mode)> {
    let (name, text) = ROW_CONFIGS
        .get(row.wrapping_sub(1))
        .ok_or_else(|| HarnessError::Config(format!("row {row} has no configuration file")))?;
    let cfg = ExperimentConfig::from_toml(text, &PathBuf::from("configs").join(name))?;
    let mode = cfg.mode.ok_or_else(|| HarnessError::Config(format!("{name} declares no mode")))?;
    Ok((cfg, mode))
}

/// Runs one acceptance row.
pub fn run_row(row: usize, out: Option<&Path>, seed: u64) -> Result<Outcome> {
    if row == 9 {
        let reports = oracle_equivalence(seed)?;
        let mut outcome = Outcome::default();
        if let Some(dir) = out {
            std::fs::create_dir_all(dir)?;
            let path = dir.join("oracle_reports.csv");
            write_reports_csv(std::fs::File::create(&path)?, &reports)?;
            outcome.files.push(path);
        }
        outcome.checks = reports
            .iter()
            .map(|r| {
                if r.quantity.contains("order") {
                    Check::target(r.quantity.clone(), r.fast, r.oracle, r.tolerance)
                } else {
                    Check::at_most(r.quantity.clone(), r.deviation, r.tolerance)
                }
            })
            .collect();
        return Ok(outcome);
    }
    let (cfg, mode) = row_config(row)?;
    execute(&cfg, mode, out, seed)
}

fn rel_err(fast: &[Complex64], oracle: &[Complex64]) -> f64 {
    let diff: f64 = fast.iter().zip(oracle).map(|(a, b)| (a - b).norm_sqr()).sum();
    let size: f64 = oracle.iter().map(|z| z.norm_sqr()).sum();
    (diff / size).sqrt()
}

fn random_vec(rng: &mut ChaCha8Rng) -> [Complex64; STATE_DIM] {
    std::array::from_fn(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// A random mode made compatible: `i xi.E = -n` and `xi.B = 0`.
fn random_compatible_mode(xi: [f64; 3], rng: &mut ChaCha8Rng) -> [Complex64; STATE_DIM] {
    let mut v = random_vec(rng);
    let r2: f64 = xi.iter().map(|x| x * x).sum();
    let e_dot: Complex64 = (0..3).map(|k| v[5 + k] * xi[k]).sum();
    let b_dot: Complex64 = (0..3).map(|k| v[8 + k] * xi[k]).sum();
    let i = Complex64::i();
    for k in 0..3 {
        v[5 + k] += -e_dot * xi[k] / r2 + i * xi[k] * v[0] / r2;
        v[8 + k] -= b_dot * xi[k] / r2;
    }
    v
}

fn low_mode_state(g: SpectralGrid) -> Result<StateVector> {
    let a = Complex64::new(1e-2, 0.0);
    let b = Complex64::new(0.0, 6e-3);
    let mode = |m: [i64; 3], z: Complex64| ScalarField::real_mode(g, m, z);
    let n0 = mode([1, 0, 0], a)?;
    let mut u0 = VectorField::zeros(g);
    u0.c[0] = mode([0, 1, 0], b)?;
    u0.c[1] = mode([1, 0, 0], a)?;
    let s0 = mode([0, 0, 1], a)?;
    let mut e_perp = VectorField::zeros(g);
    e_perp.c[2] = mode([1, 1, 0], b)?;
    let mut pot = VectorField::zeros(g);
    pot.c[1] = mode([0, 0, 1], a)?;
    Ok(init_compatible(&n0, &u0, &s0, &e_perp, &pot)?)
}

/// Fast paths against the reference implementations.
pub fn oracle_equivalence(seed: u64) -> Result<Vec<OracleReport>> {
    let p = ModelParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();

    let mut worst = 0.0f64;
    for _ in 0..100 {
        let xi = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let t = rng.random_range(0.0..20.0);
        let v = random_vec(&mut rng);
        let fast = matrix_exponential_apply(&full_generator(xi, &p), t, &v)?;
        let oracle = expm_ode_oracle(&generator_matrix(xi, &p), t, &DVector::from_row_slice(&v))?;
        worst = worst.max(rel_err(&fast, oracle.as_slice()));
    }
    reports.push(OracleReport::from_deviation("matrix exponential vs ODE, 100 pairs", worst, 1e-8));

    let mut worst = 0.0f64;
    for _ in 0..100 {
        let xi = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
        let t = rng.random_range(0.0..20.0);
        let v = random_compatible_mode(xi, &mut rng);
        let split = propagate_linear_mode(xi, t, &v, &p)?;
        let full = matrix_exponential_apply(&full_generator(xi, &p), t, &v)?;
        worst = worst.max(rel_err(&split, &full));
    }
    reports.push(OracleReport::from_deviation("split propagator vs 11x11 exponential, 100 modes", worst, 1e-8));

    let errors = [16usize, 32]
        .iter()
        .map(|&n| {
            let g = SpectralGrid::new(2.0 * PI, n)?;
            let u = low_mode_state(g)?;
            let mut d = rhs(&u, &p)?;
            d.axpy(-1.0, &fd_rhs_oracle(&u, &p));
            Ok(d.l2_norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    let order = (errors[0] / errors[1]).log2();
    reports.push(OracleReport {
        quantity: "rhs vs finite differences, convergence order".into(),
        fast: order,
        oracle: 2.0,
        deviation: (order - 2.0).abs(),
        tolerance: 0.2,
        pass: (order - 2.0).abs() <= 0.2,
    });

    let g = SpectralGrid::new(2.0 * PI, 8)?;
    let u = random_smooth_state(g, 0.1, seed)?;
    let w = EnergyWeights::default();
    let fast = EnergyEvaluator::new(g, w).evaluate(&u);
    let direct = energy_direct(&u, &w);
    for (name, a, b) in [
        ("energy E_N", fast.energy, direct.energy),
        ("energy E_N^h", fast.energy_high, direct.energy_high),
        ("dissipation D_N", fast.dissipation, direct.dissipation),
        ("dissipation D_N^h", fast.dissipation_high, direct.dissipation_high),
    ] {
        reports.push(OracleReport::new(format!("{name}, Fourier vs multi-index sums"), a, b, 1e-10));
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_row_config_parses() {
        for row in 1..=8 {
            let (cfg, mode) = row_config(row).unwrap();
            cfg.validate().unwrap();
            assert!(!mode.name().is_empty());
        }
        assert!(row_config(9).is_err());
    }

    #[test]
    fn compatible_modes_satisfy_constraints() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let xi = [0.3, -1.2, 2.0];
        let v = random_compatible_mode(xi, &mut rng);
        let gauss: Complex64 = (0..3).map(|k| Complex64::i() * xi[k] * v[5 + k]).sum::<Complex64>() + v[0];
        let div_b: Complex64 = (0..3).map(|k| xi[k] * v[8 + k]).sum();
        assert!(gauss.norm() < 1e-14 && div_b.norm() < 1e-14);
    }
}
