//! Pseudospectral time integration of the nonlinear perturbation system on a periodic box.
//!
//! The linear part is advanced exactly, mode by mode, with the exponential of the full
//! 11-component generator; the nonlinear sources are evaluated in physical space from
//! spectral derivatives and integrated with the explicit midpoint rule inside a Strang
//! splitting.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::energy::{EnergyEvaluator, EnergyWeights};
use crate::error::{Error, Result};
use crate::linalg::{expm, CMat};
use crate::model::{source_terms, ModelParams, PointState};
use crate::semigroup::full_generator;
use crate::spectral::{
    curl, divergence, e_par_from_density, helmholtz_decompose, Fft3, ScalarField,
    SpectralGrid, VectorField,
};
use crate::state::{StateVector, STATE_DIM};


/// Smallest admissible `1 + n` anywhere on the grid.
pub const DENSITY_FLOOR: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    /// Half-step exact linear flow, explicit midpoint on the sources, half-step linear flow.
    StrangExact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub grid: SpectralGrid,
    pub dt: f64,
    pub t_end: f64,
    pub dealias_fraction: f64,
    pub integrator: Integrator,
    /// Steps between diagnostic stamps.
    pub snapshot_stride: usize,
    /// Keep the full state at every diagnostic stamp.
    pub keep_snapshots: bool,
    /// Include the nonlinear sources; `false` gives the exact linear flow.
    pub nonlinear: bool,
}

impl SolverConfig {
    pub fn new(grid: SpectralGrid, dt: f64, t_end: f64) -> Self {
        SolverConfig {
            grid,
            dt,
            t_end,
            dealias_fraction: 2.0 / 3.0,
            integrator: Integrator::StrangExact,
            snapshot_stride: 1,
            keep_snapshots: false,
            nonlinear: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= self.dt && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "t_end = {} must be at least dt = {}",
                self.t_end, self.dt
            )));
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 2.0 / 3.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "dealias fraction must lie in (0, 2/3], got {}",
                self.dealias_fraction
            )));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::InvalidParameter("snapshot stride must be >= 1".into()));
        }
        Ok(())
    }

    /// Number of steps, requiring `t_end` to be a whole multiple of `dt`.
    pub fn steps(&self) -> Result<usize> {
        let n = (self.t_end / self.dt).round();
        if (n * self.dt - self.t_end).abs() > 1e-9 * self.t_end {
            return Err(Error::InvalidParameter(format!(
                "t_end = {} is not a multiple of dt = {}",
                self.t_end, self.dt
            )));
        }
        Ok(n as usize)
    }
}

/// `L^2` norms of `div E + n` and `div B`.
pub fn constraint_residuals(u: &StateVector) -> (f64, f64) {
    let mut gauss = divergence(&u.e);
    gauss.axpy(1.0, &u.n);
    (gauss.l2_norm(), divergence(&u.b).l2_norm())
}

/// Builds a state satisfying `div E = -n`, `div B = 0` from free data.
pub fn init_compatible(
    n0: &ScalarField,
    u0: &VectorField,
    sigma0: &ScalarField,
    e_perp0: &VectorField,
    a_b: &VectorField,
) -> Result<StateVector> {
    n0.require_zero_mean("initial density")?;
    sigma0.require_zero_mean("initial temperature")?;
    u0.require_zero_mean("initial velocity")?;
    e_perp0.require_zero_mean("initial transverse electric field")?;
    let div = divergence(e_perp0).l2_norm();
    let scale = crate::spectral::gradient(&e_perp0.c[0]).l2_norm()
        + crate::spectral::gradient(&e_perp0.c[1]).l2_norm()
        + crate::spectral::gradient(&e_perp0.c[2]).l2_norm();
    if div > 1e-12 * scale {
        return Err(Error::Constraint(format!("transverse electric field has divergence {div:e}")));
    }
    let mut e = e_par_from_density(n0)?;
    e.axpy(1.0, e_perp0);
    let state = StateVector {
        n: n0.clone(),
        u: u0.clone(),
        sigma: sigma0.clone(),
        e,
        b: curl(a_b),
    };
    let (re, rb) = constraint_residuals(&state);
    let size = state.l2_norm();
    if re > 1e-12 * size || rb > 1e-12 * size {
        return Err(Error::Constraint(format!(
            "constructed state has residuals ({re:e}, {rb:e}) for norm {size:e}"
        )));
    }
    Ok(state)
}

fn random_field(grid: SpectralGrid, mask: &[bool], rng: &mut ChaCha8Rng, width: f64) -> ScalarField {
    let mut f = ScalarField::from_spectral_fn(grid, |idx, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        if idx == 0 || !mask[idx] {
            return Complex64::default();
        }
        let m = grid.modes(idx);
        let m2 = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]) as f64;
        Complex64::new(re, im) * (-0.5 * m2 / (width * width)).exp()
    });
    f.enforce_hermitian();
    f
}

fn max_physical(f: &ScalarField, fft: &mut Fft3) -> f64 {
    let mut buf = vec![0.0; f.grid().len()];
    fft.to_physical(f, &mut buf);
    buf.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// A smooth random compatible state whose fields `n, u_i, sigma, E_perp,i, B_i` each have
/// maximum absolute value `amplitude`. Coefficients carry a Gaussian envelope of width two
/// lattice modes and lie inside the 2/3 dealiasing mask.
pub fn random_smooth_state(grid: SpectralGrid, amplitude: f64, seed: u64) -> Result<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = grid.dealias_mask(2.0 / 3.0);
    let mut fft = Fft3::new(grid);
    let width = 2.0;
    let normalized = |f: ScalarField, fft: &mut Fft3| {
        let m = max_physical(&f, fft);
        if m > 0.0 {
            f.scaled(amplitude / m)
        } else {
            f
        }
    };
    let n0 = random_field(grid, &mask, &mut rng, width);
    let n0 = normalized(n0, &mut fft);
    let u0 = VectorField {
        c: std::array::from_fn(|_| random_field(grid, &mask, &mut rng, width)),
    };
    let u0 = VectorField { c: u0.c.map(|f| normalized(f, &mut fft)) };
    let s0 = random_field(grid, &mask, &mut rng, width);
    let s0 = normalized(s0, &mut fft);
    let raw = VectorField {
        c: std::array::from_fn(|_| random_field(grid, &mask, &mut rng, width)),
    };
    let (_, e_perp) = helmholtz_decompose(&raw)?;
    let e_scale = e_perp.c.iter().map(|f| max_physical(f, &mut fft)).fold(0.0, f64::max);
    let e_perp = if e_scale > 0.0 { e_perp.scaled(amplitude / e_scale) } else { e_perp };
    let a = VectorField {
        c: std::array::from_fn(|_| random_field(grid, &mask, &mut rng, width)),
    };
    let b_scale = curl(&a).c.iter().map(|f| max_physical(f, &mut fft)).fold(0.0, f64::max);
    let a = if b_scale > 0.0 { a.scaled(amplitude / b_scale) } else { a };
    init_compatible(&n0, &u0, &s0, &e_perp, &a)
}

/// Physical-space evaluation of the nonlinear sources on one grid.
pub struct NonlinearSources {
    grid: SpectralGrid,
    fft: Fft3,
    mask: Vec<bool>,
    kvec: Vec<[f64; 3]>,
    phys: Vec<Vec<f64>>,
    out: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy)]
enum Sym {
    Id,
    D(usize),
    Lap,
}

// Physical buffer layout.
const P_N: usize = 0;
const P_U: usize = 1; // 3
const P_SIGMA: usize = 4;
const P_B: usize = 5; // 3
const P_GN: usize = 8; // 3
const P_GU: usize = 11; // 9, row-major d_j u_i at 11 + 3 i + j
const P_LU: usize = 20; // 3
const P_GD: usize = 23; // 3
const P_GS: usize = 26; // 3
const P_LS: usize = 29;
const P_COUNT: usize = 30;

impl NonlinearSources {
    pub fn new(grid: SpectralGrid, dealias_fraction: f64) -> Self {
        NonlinearSources {
            grid,
            fft: Fft3::new(grid),
            mask: grid.dealias_mask(dealias_fraction),
            kvec: grid.wavevectors(),
            phys: vec![vec![0.0; grid.len()]; P_COUNT],
            out: vec![vec![0.0; grid.len()]; 8],
        }
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    fn inputs_to_physical(&mut self, u: &StateVector) {
        let div = divergence(&u.u);
        let mut inputs: Vec<(&[Complex64], Sym)> = Vec::with_capacity(P_COUNT);
        inputs.push((u.n.coeffs(), Sym::Id));
        inputs.extend(u.u.c.iter().map(|f| (f.coeffs(), Sym::Id)));
        inputs.push((u.sigma.coeffs(), Sym::Id));
        inputs.extend(u.b.c.iter().map(|f| (f.coeffs(), Sym::Id)));
        inputs.extend((0..3).map(|d| (u.n.coeffs(), Sym::D(d))));
        for i in 0..3 {
            inputs.extend((0..3).map(|j| (u.u.c[i].coeffs(), Sym::D(j))));
        }
        inputs.extend(u.u.c.iter().map(|f| (f.coeffs(), Sym::Lap)));
        inputs.extend((0..3).map(|d| (div.coeffs(), Sym::D(d))));
        inputs.extend((0..3).map(|d| (u.sigma.coeffs(), Sym::D(d))));
        inputs.push((u.sigma.coeffs(), Sym::Lap));
        let k = &self.kvec;
        let apply = |c: Complex64, sym: Sym, idx: usize| match sym {
            Sym::Id => c,
            Sym::D(d) => Complex64::new(-c.im * k[idx][d], c.re * k[idx][d]),
            Sym::Lap => -c * (k[idx][0] * k[idx][0] + k[idx][1] * k[idx][1] + k[idx][2] * k[idx][2]),
        };
        for p in 0..P_COUNT / 2 {
            let (fa, sa) = inputs[2 * p];
            let (fb, sb) = inputs[2 * p + 1];
            let (lo, hi) = self.phys.split_at_mut(2 * p + 1);
            self.fft.to_physical_with(
                |idx| (apply(fa[idx], sa, idx), apply(fb[idx], sb, idx)),
                &mut lo[2 * p],
                &mut hi[0],
            );
        }
    }

    /// Sources packed as a state: `n <- h1`, `u <- h2`, `sigma <- h3`, `E <- h4`, `B <- 0`,
    /// truncated to the dealiasing mask with zero mean.
    pub fn evaluate(&mut self, u: &StateVector, params: &ModelParams) -> Result<StateVector> {
        assert_eq!(u.grid(), self.grid);
        self.inputs_to_physical(u);
        let min_rho = self.phys[P_N].iter().fold(f64::INFINITY, |m, &x| m.min(1.0 + x));
        if !(min_rho >= DENSITY_FLOOR) {
            return Err(Error::SingularCoefficient { min_density: min_rho });
        }
        let ph = &self.phys;
        for x in 0..self.grid.len() {
            let v = |i: usize| ph[i][x];
            let st = PointState {
                n: v(P_N),
                u: [v(P_U), v(P_U + 1), v(P_U + 2)],
                sigma: v(P_SIGMA),
                b: [v(P_B), v(P_B + 1), v(P_B + 2)],
                grad_n: [v(P_GN), v(P_GN + 1), v(P_GN + 2)],
                grad_u: std::array::from_fn(|i| std::array::from_fn(|j| v(P_GU + 3 * i + j))),
                lap_u: [v(P_LU), v(P_LU + 1), v(P_LU + 2)],
                grad_div_u: [v(P_GD), v(P_GD + 1), v(P_GD + 2)],
                grad_sigma: [v(P_GS), v(P_GS + 1), v(P_GS + 2)],
                lap_sigma: v(P_LS),
                grad_nu: [[0.0; 3]; 3],
            };
            let s = source_terms(&st, params)?;
            self.out[0][x] = s.h2[0];
            self.out[1][x] = s.h2[1];
            self.out[2][x] = s.h2[2];
            self.out[3][x] = s.h3;
            self.out[4][x] = s.h4[0];
            self.out[5][x] = s.h4[1];
            self.out[6][x] = s.h4[2];
            self.out[7][x] = 0.0;
        }
        let mut spectral = Vec::with_capacity(8);
        for p in 0..4 {
            let (a, b) = self.fft.from_physical_pair(&self.out[2 * p], &self.out[2 * p + 1]);
            spectral.push(a);
            spectral.push(b);
        }
        let mut it = spectral.into_iter();
        let mut next = || {
            let mut f = it.next().expect("eight transformed fields");
            f.apply_mask(&self.mask);
            f.coeffs_mut()[0] = Complex64::default();
            f
        };
        let h2 = VectorField { c: [next(), next(), next()] };
        let h3 = next();
        let h4 = VectorField { c: [next(), next(), next()] };
        let mut h1 = divergence(&h4);
        h1 = h1.scaled(-1.0);
        Ok(StateVector { n: h1, u: h2, sigma: h3, e: h4, b: VectorField::zeros(self.grid) })
    }
}

/// Applies the linear generator mode by mode.
pub fn linear_rhs(u: &StateVector, params: &ModelParams) -> StateVector {
    let g = u.grid();
    let mut out = StateVector::zeros(g);
    for idx in 0..g.len() {
        let v = u.mode(idx);
        if v.iter().all(|z| *z == Complex64::default()) {
            continue;
        }
        let l = full_generator(g.wavevector(idx), params);
        out.set_mode(idx, &l.matvec(&v));
    }
    out
}

/// Time derivative of a dealiased, zero-mean state: linear generator plus sources.
pub fn rhs(u: &StateVector, params: &ModelParams) -> Result<StateVector> {
    let mut src = NonlinearSources::new(u.grid(), 2.0 / 3.0);
    let mut out = src.evaluate(u, params)?;
    out.axpy(1.0, &linear_rhs(u, params));
    Ok(out)
}

/// Strang-split stepper with cached half-step exponentials.
pub struct Stepper {
    config: SolverConfig,
    params: ModelParams,
    /// `(index, exp(L dt / 2))` over the retained modes; the matrix at `-k` is the conjugate
    /// of the one at `k`.
    half: Vec<(usize, CMat<STATE_DIM>)>,
    sources: NonlinearSources,
}

impl Stepper {
    pub fn new(config: &SolverConfig, params: &ModelParams) -> Result<Self> {
        config.validate()?;
        let g = config.grid;
        let sources = NonlinearSources::new(g, config.dealias_fraction);
        let mut half = Vec::new();
        for idx in 0..g.len() {
            if !sources.mask()[idx] {
                continue;
            }
            let neg = g.negated(idx);
            if neg < idx {
                continue;
            }
            let l = full_generator(g.wavevector(idx), params).scale_real(0.5 * config.dt);
            let p = expm(&l)?;
            if neg != idx {
                let mut pc = p;
                pc.0.iter_mut().flatten().for_each(|z| *z = z.conj());
                half.push((neg, pc));
            }
            half.push((idx, p));
        }
        Ok(Stepper { config: config.clone(), params: *params, half, sources })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn mask(&self) -> &[bool] {
        self.sources.mask()
    }

    fn linear_half(&self, u: &mut StateVector) {
        for (idx, p) in &self.half {
            let v = u.mode(*idx);
            u.set_mode(*idx, &p.matvec(&v));
        }
    }

    /// Advances `u` by one step from time `t`.
    pub fn step(&mut self, u: &mut StateVector, t: f64) -> Result<()> {
        let dt = self.config.dt;
        self.linear_half(u);
        if self.config.nonlinear {
            let k1 = self.sources.evaluate(u, &self.params)?;
            let mut mid = u.clone();
            mid.axpy(0.5 * dt, &k1);
            let k2 = self.sources.evaluate(&mid, &self.params)?;
            u.axpy(dt, &k2);
        }
        self.linear_half(u);
        if !u.is_finite() {
            return Err(Error::BlowUp { time: t + dt });
        }
        Ok(())
    }
}

/// One Strang step of size `dt` with the default dealiasing.
pub fn step(u: &StateVector, dt: f64, params: &ModelParams) -> Result<StateVector> {
    let cfg = SolverConfig::new(u.grid(), dt, dt);
    let mut stepper = Stepper::new(&cfg, params)?;
    let mut out = u.clone();
    out.apply_mask(stepper.mask());
    stepper.step(&mut out, 0.0)?;
    Ok(out)
}

/// Diagnostics at one stamp.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    pub t: f64,
    pub l2_n: f64,
    pub l2_u: f64,
    pub l2_sigma: f64,
    pub l2_e: f64,
    pub l2_b: f64,
    /// `|U|_{H^N}` with `N` the energy order.
    pub h_n_total: f64,
    pub energy: f64,
    pub energy_high: f64,
    pub dissipation: f64,
    pub dissipation_high: f64,
    pub res_div_e: f64,
    pub res_div_b: f64,
}

impl Diagnostics {
    pub fn of(t: f64, u: &StateVector, energy: &EnergyEvaluator) -> Self {
        let e = energy.evaluate(u);
        let (res_div_e, res_div_b) = constraint_residuals(u);
        Diagnostics {
            t,
            l2_n: u.n.l2_norm(),
            l2_u: u.u.l2_norm(),
            l2_sigma: u.sigma.l2_norm(),
            l2_e: u.e.l2_norm(),
            l2_b: u.b.l2_norm(),
            h_n_total: e.norm_sq.sqrt(),
            energy: e.energy,
            energy_high: e.energy_high,
            dissipation: e.dissipation,
            dissipation_high: e.dissipation_high,
            res_div_e,
            res_div_b,
        }
    }

    /// `L^2` norm of the whole state.
    pub fn state_l2(&self) -> f64 {
        (self.l2_n.powi(2) + self.l2_u.powi(2) + self.l2_sigma.powi(2) + self.l2_e.powi(2) + self.l2_b.powi(2))
            .sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub rows: Vec<Diagnostics>,
    /// States at the stamps of `rows` when snapshots are kept.
    pub snapshots: Vec<StateVector>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }
}

/// A failed run with everything computed before the failure.
#[derive(Debug)]
pub struct RunError {
    pub error: Error,
    pub partial: Trajectory,
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (after {} diagnostic stamps)", self.error, self.partial.rows.len())
    }
}

impl std::error::Error for RunError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

impl From<Error> for RunError {
    fn from(error: Error) -> Self {
        RunError { error, partial: Trajectory::default() }
    }
}

/// Integrates from a compatible state, recording diagnostics every `snapshot_stride` steps
/// and at the final time. The initial state is truncated to the dealiasing mask.
pub fn run(
    u0: &StateVector,
    config: &SolverConfig,
    params: &ModelParams,
    weights: &EnergyWeights,
) -> std::result::Result<Trajectory, RunError> {
    if u0.grid() != config.grid {
        return Err(Error::InvalidParameter("initial state is on a different grid".into()).into());
    }
    let steps = config.steps()?;
    let (re, rb) = constraint_residuals(u0);
    let size = u0.l2_norm();
    if re > 1e-10 * size || rb > 1e-10 * size {
        return Err(Error::Constraint(format!(
            "initial state is not compatible: residuals ({re:e}, {rb:e}) for norm {size:e}"
        ))
        .into());
    }
    let mut stepper = Stepper::new(config, params)?;
    let energy = EnergyEvaluator::new(config.grid, *weights);
    let mut u = u0.clone();
    u.apply_mask(stepper.mask());
    let mut traj = Trajectory::default();
    let record = |traj: &mut Trajectory, t: f64, u: &StateVector| {
        traj.rows.push(Diagnostics::of(t, u, &energy));
        if config.keep_snapshots {
            traj.snapshots.push(u.clone());
        }
    };
    record(&mut traj, 0.0, &u);
    for s in 0..steps {
        let t = s as f64 * config.dt;
        if let Err(error) = stepper.step(&mut u, t) {
            return Err(RunError { error, partial: traj });
        }
        let done = s + 1;
        if done % config.snapshot_stride == 0 || done == steps {
            record(&mut traj, done as f64 * config.dt, &u);
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::propagate_linear_mode;
    use std::f64::consts::PI;

    fn grid(n: usize) -> SpectralGrid {
        SpectralGrid::new(2.0 * PI, n).unwrap()
    }

    #[test]
    fn zero_state_is_stationary() {
        let g = grid(8);
        let z = StateVector::zeros(g);
        let r = rhs(&z, &ModelParams::default()).unwrap();
        assert_eq!(r.max_abs_coeff(), 0.0);
        let s = step(&z, 0.01, &ModelParams::default()).unwrap();
        assert_eq!(s.max_abs_coeff(), 0.0);
    }

    #[test]
    fn init_from_zero_inputs() {
        let g = grid(8);
        let z = ScalarField::zeros(g);
        let v = VectorField::zeros(g);
        let s = init_compatible(&z, &v, &z, &v, &v).unwrap();
        assert_eq!(s, StateVector::zeros(g));
    }

    #[test]
    fn init_rejects_divergent_transverse_field() {
        let g = grid(8);
        let z = ScalarField::zeros(g);
        let v = VectorField::zeros(g);
        let mut e = VectorField::zeros(g);
        e.c[0] = ScalarField::real_mode(g, [1, 0, 0], Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(init_compatible(&z, &v, &z, &e, &v), Err(Error::Constraint(_))));
    }

    #[test]
    fn random_state_is_compatible() {
        let g = grid(16);
        let s = random_smooth_state(g, 1e-2, 7).unwrap();
        let (re, rb) = constraint_residuals(&s);
        let size = s.l2_norm();
        assert!(re < 1e-13 * size && rb < 1e-13 * size);
        let again = random_smooth_state(g, 1e-2, 7).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn linear_step_matches_mode_propagator() {
        let g = grid(8);
        let p = ModelParams::default();
        let s = random_smooth_state(g, 1e-2, 3).unwrap();
        let mut cfg = SolverConfig::new(g, 0.05, 0.05);
        cfg.nonlinear = false;
        let mut stepper = Stepper::new(&cfg, &p).unwrap();
        let mut u = s.clone();
        u.apply_mask(stepper.mask());
        stepper.step(&mut u, 0.0).unwrap();
        let scale = s.max_abs_coeff();
        for idx in 1..g.len() {
            if !stepper.mask()[idx] {
                continue;
            }
            let want = propagate_linear_mode(g.wavevector(idx), 0.05, &s.mode(idx), &p).unwrap();
            let got = u.mode(idx);
            for c in 0..STATE_DIM {
                assert!((want[c] - got[c]).norm() < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn step_preserves_mean_and_symmetry() {
        let g = grid(16);
        let p = ModelParams::default();
        let s = random_smooth_state(g, 1e-2, 11).unwrap();
        let out = step(&s, 0.01, &p).unwrap();
        for f in out.fields() {
            assert_eq!(f.mean(), Complex64::default());
            assert_eq!(f.hermitian_defect(), 0.0);
        }
    }

    #[test]
    fn singular_density_is_rejected() {
        let g = grid(8);
        let mut s = StateVector::zeros(g);
        s.n = ScalarField::real_mode(g, [1, 0, 0], Complex64::new(0.5, 0.0)).unwrap();
        assert!(matches!(
            rhs(&s, &ModelParams::default()),
            Err(Error::SingularCoefficient { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let g = grid(8);
        let mut c = SolverConfig::new(g, 0.01, 1.0);
        assert!(c.validate().is_ok());
        c.dealias_fraction = 0.9;
        assert!(c.validate().is_err());
        let c = SolverConfig::new(g, 0.03, 1.0);
        assert!(c.steps().is_err());
    }
}
