//! Nonlinear runs on the periodic box.

use nsm_core::energy::{monitor_dissipation, EnergyWeights, MonitorReport};
use nsm_core::solver::{linear_rhs, random_smooth_state, rhs, run, SolverConfig, Stepper, Trajectory};
use nsm_core::spectral::SpectralGrid;
use nsm_core::state::StateVector;
use nsm_core::ModelParams;

use crate::config::{ConsistencyConfig, MonitorConfig, NonlinearConfig};
use crate::error::{HarnessError, Result};
use crate::report::Check;

#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearReport {
    pub trajectory: Trajectory,
    pub monitor: MonitorReport,
    /// Largest `(E_{i+1} - E_i) / E_i` between consecutive rows.
    pub max_energy_increase: f64,
    pub max_res_div_e: f64,
    pub max_res_div_b: f64,
    pub checks: Vec<Check>,
}

fn solver_config(cfg: &NonlinearConfig) -> Result<(SolverConfig, EnergyWeights)> {
    let grid = SpectralGrid::new(cfg.box_length, cfg.resolution)?;
    let mut sc = SolverConfig::new(grid, cfg.dt, cfg.t_end);
    sc.dealias_fraction = cfg.dealias_fraction;
    sc.snapshot_stride = cfg.stride;
    sc.validate()?;
    Ok((sc, cfg.energy.weights()?))
}

/// Runs from a random compatible state of the configured amplitude.
pub fn run_nonlinear_study(
    cfg: &NonlinearConfig,
    params: &ModelParams,
    seed: u64,
    c_trial: f64,
) -> Result<NonlinearReport> {
    let (sc, weights) = solver_config(cfg)?;
    let u0 = random_smooth_state(sc.grid, cfg.amplitude, seed)?;
    let trajectory = run(&u0, &sc, params, &weights).map_err(Box::new)?;
    let rows = &trajectory.rows;
    let max_energy_increase =
        rows.windows(2).map(|w| (w[1].energy - w[0].energy) / w[0].energy).fold(f64::NEG_INFINITY, f64::max);
    let rel = |x: f64, d: &nsm_core::solver::Diagnostics| x / d.state_l2();
    let max_res_div_e = rows.iter().map(|d| rel(d.res_div_e, d)).fold(0.0, f64::max);
    let max_res_div_b = rows.iter().map(|d| rel(d.res_div_b, d)).fold(0.0, f64::max);
    let samples: Vec<(f64, f64, f64)> = rows.iter().map(|d| (d.t, d.energy, d.dissipation)).collect();
    let monitor = monitor_dissipation(&samples, c_trial)?;
    let checks = vec![
        Check::at_most("E_N relative increase per row", max_energy_increase, cfg.monotone_tolerance),
        Check::at_most("|div E + n| / |U|", max_res_div_e, cfg.residual_tolerance),
        Check::at_most("|div B| / |U|", max_res_div_b, cfg.residual_tolerance),
    ];
    Ok(NonlinearReport { trajectory, monitor, max_energy_increase, max_res_div_e, max_res_div_b, checks })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    num / den
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    /// `(eps, |rhs(eps U) - L(eps U)|)`.
    pub remainder: Vec<(f64, f64)>,
    pub remainder_order: f64,
    /// `(dt, |U_dt(T) - U_ref(T)|)`.
    pub stepping: Vec<(f64, f64)>,
    pub stepping_order: f64,
    pub checks: Vec<Check>,
}

fn integrate(u0: &StateVector, dt: f64, t_end: f64, dealias: f64, params: &ModelParams) -> Result<StateVector> {
    let mut sc = SolverConfig::new(u0.grid(), dt, t_end);
    sc.dealias_fraction = dealias;
    let mut stepper = Stepper::new(&sc, params)?;
    let mut u = u0.clone();
    u.apply_mask(stepper.mask());
    for i in 0..sc.steps()? {
        stepper.step(&mut u, i as f64 * dt)?;
    }
    Ok(u)
}

/// Quadratic scaling of the nonlinear remainder and second-order convergence in `dt`.
pub fn run_consistency_study(
    cfg: &ConsistencyConfig,
    nl: &NonlinearConfig,
    params: &ModelParams,
    seed: u64,
) -> Result<ConsistencyReport> {
    let grid = SpectralGrid::new(nl.box_length, cfg.resolution)?;
    let base = random_smooth_state(grid, 1.0, seed)?;
    let remainder = cfg
        .epsilons
        .iter()
        .map(|&e| {
            let ue = base.scaled(e);
            let mut d = rhs(&ue, params)?;
            d.axpy(-1.0, &linear_rhs(&ue, params));
            Ok((e, d.l2_norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    let (x, y): (Vec<f64>, Vec<f64>) = remainder.iter().copied().unzip();
    let remainder_order = log_log_slope(&x, &y);

    let u0 = random_smooth_state(grid, cfg.amplitude, seed)?;
    let dt_min = cfg.dts.iter().copied().fold(f64::INFINITY, f64::min);
    let reference = integrate(&u0, dt_min / cfg.reference_refinement as f64, cfg.t_end, nl.dealias_fraction, params)?;
    let stepping = cfg
        .dts
        .iter()
        .map(|&dt| {
            let mut d = integrate(&u0, dt, cfg.t_end, nl.dealias_fraction, params)?;
            d.axpy(-1.0, &reference);
            Ok((dt, d.l2_norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    let (x, y): (Vec<f64>, Vec<f64>) = stepping.iter().copied().unzip();
    let stepping_order = log_log_slope(&x, &y);

    let checks = vec![
        Check::target("nonlinear remainder order", remainder_order, cfg.order_target, cfg.order_tolerance),
        Check::target("time-stepper order", stepping_order, cfg.dt_order_target, cfg.dt_order_tolerance),
    ];
    Ok(ConsistencyReport { remainder, remainder_order, stepping, stepping_order, checks })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonitorSweep {
    /// One monitor report per amplitude.
    pub runs: Vec<(f64, MonitorReport)>,
    pub checks: Vec<Check>,
}

/// Dissipation monitor along runs of increasing amplitude.
pub fn run_energy_monitor(cfg: &MonitorConfig, params: &ModelParams, seed: u64) -> Result<MonitorSweep> {
    let mut runs = Vec::new();
    let mut checks = Vec::new();
    for &amp in &cfg.amplitudes {
        let nl = NonlinearConfig { amplitude: amp, ..cfg.run.clone() };
        let rep = run_nonlinear_study(&nl, params, seed, cfg.c_trial)?;
        checks.push(Check::flag(
            format!("dE/dt + {} D <= 0 at amplitude {amp:e}", cfg.c_trial),
            rep.monitor.violation_fraction,
            rep.monitor.violation_fraction == 0.0,
        ));
        runs.push((amp, rep.monitor));
    }
    let cs: Vec<f64> = runs.iter().map(|(_, m)| m.max_admissible_c).collect();
    let (lo, hi) = cs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &c| (a.min(c), b.max(c)));
    if lo > 0.0 && hi.is_finite() {
        checks.push(Check::at_most("spread of admissible c over amplitudes", hi / lo, cfg.max_c_ratio));
    } else {
        checks.push(Check::flag("admissible c positive and finite for every amplitude", lo, false));
    }
    Ok(MonitorSweep { runs, checks })
}

/// The partial trajectory of a failed run, if any.
pub fn partial_trajectory(err: &HarnessError) -> Option<&Trajectory> {
    match err {
        HarnessError::Run(r) => Some(&r.partial),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power() {
        let x = [1.0, 2.0, 4.0];
        let y = x.map(|v: f64| 3.0 * v * v);
        assert!((log_log_slope(&x, &y) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn short_run_is_monotone_and_compatible() {
        let cfg = NonlinearConfig { resolution: 8, t_end: 0.2, ..NonlinearConfig::default() };
        let rep = run_nonlinear_study(&cfg, &ModelParams::default(), 3, 0.01).unwrap();
        assert_eq!(rep.trajectory.rows.len(), 21);
        assert!(rep.checks.iter().all(|c| c.pass), "{:?}", rep.checks);
    }
}
