//! Instant energy functionals, dissipation rates and their monitors.
//!
//! All functionals are sums over Fourier modes of quadratic forms in the eleven
//! coefficients, times the box volume. For a multi-index range `lo <= |alpha| <= hi` the
//! per-mode weight is `w_hi(k) - w_{lo-1}(k)` with `w_m(k) = sum_{|alpha| <= m} k^{2 alpha}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::spectral::{sobolev_weight, SpectralGrid};
use crate::state::{StateVector, STATE_DIM};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Sobolev order and interaction weights of the energy functionals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyWeights {
    pub order: usize,
    pub kappa1: f64,
    pub kappa2: f64,
}

impl Default for EnergyWeights {
    fn default() -> Self {
        EnergyWeights { order: 4, kappa1: 0.05, kappa2: 0.5 }
    }
}

impl EnergyWeights {
    /// Validates the weights against a fixed probe set of single-mode states.
    pub fn new(order: usize, kappa1: f64, kappa2: f64) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidParameter("energy order must be >= 1".into()));
        }
        if !(kappa1 >= 0.0 && kappa2 >= 0.0 && kappa1.is_finite() && kappa2.is_finite()) {
            return Err(Error::InvalidParameter("kappa1 and kappa2 must be finite and >= 0".into()));
        }
        if order < 3 {
            log::warn!("energy order {order} < 3: the magnetic dissipation term is omitted");
        }
        let w = EnergyWeights { order, kappa1, kappa2 };
        let c_low = w.probe_lower_bound();
        if c_low <= 0.0 {
            return Err(Error::WeightsTooLarge { c_low });
        }
        Ok(w)
    }

    /// Smallest ratio `E_N / |U|_N^2` over single modes on a sweep of wavevectors, from the
    /// lowest eigenvalue of the per-mode Hermitian form.
    fn probe_lower_bound(&self) -> f64 {
        let dirs = [[1.0, 0.0, 0.0], [1.0, 1.0, 1.0], [0.0, 5.0, 2.0]];
        let mut low = f64::INFINITY;
        for d in dirs {
            let len = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) as f64;
            for step in 0..=40 {
                let r = 10f64.powf(-1.0 + step as f64 * 0.075);
                let k = d.map(|x: f64| x * r / len.sqrt());
                let wts = ModeWeights::new(k, self.order);
                let q = |v: &[Complex64; STATE_DIM]| self.full_form(&ModeTerms::new(k, v), &wts);
                let a = hermitian_of(q);
                let lam = crate::linalg::eigenvalues(&a)
                    .map(|ev| ev.iter().fold(f64::INFINITY, |m, z| m.min(z.re)))
                    .unwrap_or(f64::NEG_INFINITY);
                low = low.min(lam / wts.range(0, self.order as i64));
            }
        }
        low
    }

    fn full_form(&self, t: &ModeTerms, w: &ModeWeights) -> f64 {
        let n = self.order as i64;
        w.range(0, n) * t.mass + self.kappa1 * w.range(0, n - 1) * t.u_grad_n
            + self.kappa1 * w.range(0, n - 2) * t.curl_u_curl_e
            - self.kappa1 * self.kappa2 * w.range(1, n - 2) * t.e_curl_b
    }

    fn high_form(&self, t: &ModeTerms, w: &ModeWeights) -> f64 {
        let n = self.order as i64;
        w.k2 * w.range(0, n - 1) * t.mass + self.kappa1 * w.range(1, n - 1) * t.u_grad_n
            + self.kappa1 * w.range(1, n - 2) * t.curl_u_curl_e
            - self.kappa1 * self.kappa2 * w.range(2, n - 2) * t.e_curl_b
    }

    fn dissipation_form(&self, t: &ModeTerms, w: &ModeWeights) -> f64 {
        let n = self.order as i64;
        w.k2 * w.range(0, n) * t.u2
            + w.range(0, n) * t.n2
            + w.k2 * w.range(0, n) * t.sigma2
            + w.k2 * w.range(0, n - 2) * t.e2
            + w.k2 * w.k2 * w.range(0, n - 3) * t.b2
    }

    fn dissipation_high_form(&self, t: &ModeTerms, w: &ModeWeights) -> f64 {
        let n = self.order as i64;
        let k4 = w.k2 * w.k2;
        k4 * w.range(0, n - 1) * t.u2
            + w.k2 * w.range(0, n - 1) * t.n2
            + k4 * w.range(0, n - 1) * t.sigma2
            + k4 * w.range(0, n - 3) * t.e2
            + k4 * w.k2 * w.range(0, n - 4) * t.b2
    }
}

/// Per-mode quadratic quantities.
#[derive(Debug, Clone, Copy, Default)]
struct ModeTerms {
    mass: f64,
    n2: f64,
    u2: f64,
    sigma2: f64,
    e2: f64,
    b2: f64,
    /// `Re conj(u) . (i k n)`
    u_grad_n: f64,
    /// `Re conj(i k x u) . (i k x E)`
    curl_u_curl_e: f64,
    /// `Re conj(E) . (i k x B)`
    e_curl_b: f64,
}

fn cross(a: [Complex64; 3], b: [Complex64; 3]) -> [Complex64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn re_dot(a: [Complex64; 3], b: [Complex64; 3]) -> f64 {
    (0..3).map(|i| (a[i].conj() * b[i]).re).sum()
}

impl ModeTerms {
    fn new(k: [f64; 3], v: &[Complex64; STATE_DIM]) -> Self {
        let ik = k.map(|x| I * x);
        let n = v[0];
        let u = [v[1], v[2], v[3]];
        let e = [v[5], v[6], v[7]];
        let b = [v[8], v[9], v[10]];
        let sq = |xs: &[Complex64]| xs.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let u2 = sq(&u);
        let e2 = sq(&e);
        let b2 = sq(&b);
        let n2 = n.norm_sqr();
        let sigma2 = v[4].norm_sqr();
        ModeTerms {
            mass: n2 + u2 + sigma2 + e2 + b2,
            n2,
            u2,
            sigma2,
            e2,
            b2,
            u_grad_n: re_dot(u, ik.map(|x| x * n)),
            curl_u_curl_e: re_dot(cross(ik, u), cross(ik, e)),
            e_curl_b: re_dot(e, cross(ik, b)),
        }
    }
}

/// Hermitian matrix of a real quadratic form `q(v) = Re v* A v`, by polarization.
fn hermitian_of(q: impl Fn(&[Complex64; STATE_DIM]) -> f64) -> CMat<STATE_DIM> {
    let unit = |i: usize, z: Complex64| {
        let mut v = [Complex64::default(); STATE_DIM];
        v[i] += z;
        v
    };
    let diag: [f64; STATE_DIM] = std::array::from_fn(|i| q(&unit(i, Complex64::new(1.0, 0.0))));
    CMat::from_fn(|i, j| {
        if i == j {
            return Complex64::new(diag[i], 0.0);
        }
        let mut v = unit(i, Complex64::new(1.0, 0.0));
        v[j] += Complex64::new(1.0, 0.0);
        let re = 0.5 * (q(&v) - diag[i] - diag[j]);
        let mut v = unit(i, Complex64::new(1.0, 0.0));
        v[j] += I;
        let im = -0.5 * (q(&v) - diag[i] - diag[j]);
        Complex64::new(re, im)
    })
}

/// `w_m(k)` for `m = 0..=order` plus `|k|^2`.
#[derive(Debug, Clone)]
struct ModeWeights {
    k2: f64,
    w: Vec<f64>,
}

impl ModeWeights {
    fn new(k: [f64; 3], order: usize) -> Self {
        ModeWeights {
            k2: k.iter().map(|x| x * x).sum(),
            w: (0..=order).map(|m| sobolev_weight(k, m)).collect(),
        }
    }

    /// Weight of the multi-index range `lo <= |alpha| <= hi`; zero if empty.
    fn range(&self, lo: i64, hi: i64) -> f64 {
        if hi < lo || hi < 0 {
            return 0.0;
        }
        let top = self.w[hi as usize];
        if lo <= 0 {
            top
        } else {
            top - self.w[(lo - 1) as usize]
        }
    }
}

/// Cached per-mode weights for repeated evaluation on one grid.
#[derive(Debug, Clone)]
pub struct EnergyEvaluator {
    grid: SpectralGrid,
    weights: EnergyWeights,
    modes: Vec<(usize, [f64; 3], ModeWeights)>,
}

/// The four functionals at one state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergySnapshot {
    pub energy: f64,
    pub energy_high: f64,
    pub dissipation: f64,
    pub dissipation_high: f64,
    /// `|U|_N^2`
    pub norm_sq: f64,
}

impl EnergyEvaluator {
    pub fn new(grid: SpectralGrid, weights: EnergyWeights) -> Self {
        let modes = (0..grid.len())
            .filter(|&idx| !grid.is_nyquist(idx))
            .map(|idx| {
                let k = grid.wavevector(idx);
                (idx, k, ModeWeights::new(k, weights.order))
            })
            .collect();
        EnergyEvaluator { grid, weights, modes }
    }

    pub fn weights(&self) -> EnergyWeights {
        self.weights
    }

    pub fn evaluate(&self, u: &StateVector) -> EnergySnapshot {
        assert_eq!(u.grid(), self.grid);
        let fields = u.fields();
        let mut s = EnergySnapshot::default();
        for (idx, k, w) in &self.modes {
            let v: [Complex64; STATE_DIM] = std::array::from_fn(|c| fields[c].coeffs()[*idx]);
            if v.iter().all(|z| *z == Complex64::default()) {
                continue;
            }
            let t = ModeTerms::new(*k, &v);
            s.energy += self.weights.full_form(&t, w);
            s.energy_high += self.weights.high_form(&t, w);
            s.dissipation += self.weights.dissipation_form(&t, w);
            s.dissipation_high += self.weights.dissipation_high_form(&t, w);
            s.norm_sq += w.range(0, self.weights.order as i64) * t.mass;
        }
        let vol = self.grid.volume();
        s.energy *= vol;
        s.energy_high *= vol;
        s.dissipation *= vol;
        s.dissipation_high *= vol;
        s.norm_sq *= vol;
        s
    }
}

pub fn energy_full(u: &StateVector, weights: &EnergyWeights) -> f64 {
    EnergyEvaluator::new(u.grid(), *weights).evaluate(u).energy
}

pub fn energy_high(u: &StateVector, weights: &EnergyWeights) -> f64 {
    EnergyEvaluator::new(u.grid(), *weights).evaluate(u).energy_high
}

pub fn dissipation(u: &StateVector, weights: &EnergyWeights) -> f64 {
    EnergyEvaluator::new(u.grid(), *weights).evaluate(u).dissipation
}

pub fn dissipation_high(u: &StateVector, weights: &EnergyWeights) -> f64 {
    EnergyEvaluator::new(u.grid(), *weights).evaluate(u).dissipation_high
}

/// Empirical equivalence constants `min` and `max` of `E_N / |U|_N^2` over the probes.
pub fn equivalence_report(weights: &EnergyWeights, probes: &[StateVector]) -> Result<(f64, f64)> {
    if probes.is_empty() {
        return Err(Error::InvalidParameter("empty probe set".into()));
    }
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for p in probes {
        let s = EnergyEvaluator::new(p.grid(), *weights).evaluate(p);
        if s.norm_sq <= 0.0 {
            return Err(Error::InvalidParameter("probe states must be nonzero".into()));
        }
        let q = s.energy / s.norm_sq;
        lo = lo.min(q);
        hi = hi.max(q);
    }
    if lo <= 0.0 {
        return Err(Error::WeightsTooLarge { c_low: lo });
    }
    Ok((lo, hi))
}

/// One monitored stamp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonitorRow {
    pub t: f64,
    pub energy: f64,
    pub dissipation: f64,
    pub d_energy_dt: f64,
    /// Largest `c` with `dE/dt + c D <= tol` at this stamp (infinite when `D = 0` and the
    /// inequality holds).
    pub max_admissible_c: f64,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonitorReport {
    pub c_trial: f64,
    pub rows: Vec<MonitorRow>,
    /// Fraction of stamps with `dE/dt + c_trial D` above tolerance.
    pub violation_fraction: f64,
    /// Minimum of the per-stamp admissible `c` (negative if `E_N` grows somewhere).
    pub max_admissible_c: f64,
}

/// Checks `dE_N/dt + c D_N <= 0` along sampled `(t, E_N, D_N)` with centred differences
/// in the interior and one-sided differences at the ends. The tolerance at each stamp is
/// `1e-8 * E_N / dt` with `dt` the local sample spacing.
pub fn monitor_dissipation(samples: &[(f64, f64, f64)], c_trial: f64) -> Result<MonitorReport> {
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::InvalidParameter("monitor times must be strictly increasing".into()));
    }
    let n = samples.len();
    let mut rows = Vec::with_capacity(n);
    if n < 2 {
        return Ok(MonitorReport {
            c_trial,
            rows,
            violation_fraction: 0.0,
            max_admissible_c: f64::INFINITY,
        });
    }
    let mut violations = 0usize;
    let mut admissible = f64::INFINITY;
    for i in 0..n {
        let (a, b) = if i == 0 {
            (0, 1)
        } else if i == n - 1 {
            (n - 2, n - 1)
        } else {
            (i - 1, i + 1)
        };
        let dt = samples[b].0 - samples[a].0;
        let dedt = (samples[b].1 - samples[a].1) / dt;
        let (t, e, d) = samples[i];
        let tol = 1e-8 * e.abs() / dt;
        let violated = dedt + c_trial * d > tol;
        let c_max = if d > 0.0 {
            (tol - dedt) / d
        } else if dedt <= tol {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        if violated {
            violations += 1;
        }
        admissible = admissible.min(c_max);
        rows.push(MonitorRow { t, energy: e, dissipation: d, d_energy_dt: dedt, max_admissible_c: c_max, violated });
    }
    Ok(MonitorReport {
        c_trial,
        rows,
        violation_fraction: violations as f64 / n as f64,
        max_admissible_c: admissible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::ScalarField;
    use std::f64::consts::PI;

    fn grid() -> SpectralGrid {
        SpectralGrid::new(2.0 * PI, 8).unwrap()
    }

    fn sample_state() -> StateVector {
        let g = grid();
        let mut s = StateVector::zeros(g);
        let modes = [[1, 0, 0], [0, 1, 2], [1, -1, 1], [2, 0, -1]];
        for (c, f) in s.fields_mut().into_iter().enumerate() {
            for (j, m) in modes.iter().enumerate() {
                let a = Complex64::new(((c + 1) * (j + 2)) as f64 * 0.01, (c as f64 - j as f64) * 0.02);
                f.axpy(1.0, &ScalarField::real_mode(g, *m, a).unwrap());
            }
        }
        s
    }

    #[test]
    fn zero_state() {
        let s = StateVector::zeros(grid());
        let e = EnergyEvaluator::new(grid(), EnergyWeights::default()).evaluate(&s);
        assert_eq!(e, EnergySnapshot::default());
    }

    #[test]
    fn kappa_zero_gives_sobolev_norm() {
        let s = sample_state();
        let w = EnergyWeights::new(4, 0.0, 0.5).unwrap();
        let e = energy_full(&s, &w);
        let h = crate::spectral::sobolev_norm(&s, 4).powi(2);
        assert!(((e - h) / h).abs() < 1e-13);
        let eh = energy_high(&s, &w);
        let grad: f64 = s
            .fields()
            .iter()
            .map(|f| {
                let gf = crate::spectral::gradient(f);
                crate::spectral::sobolev_norm(&gf, 3).powi(2)
            })
            .sum();
        assert!(((eh - grad) / grad).abs() < 1e-13);
    }

    #[test]
    fn order_one_high_energy_is_gradient_norm() {
        let s = sample_state();
        let w = EnergyWeights::new(1, 0.05, 0.5).unwrap();
        let eh = energy_high(&s, &w);
        let grad: f64 = s
            .fields()
            .iter()
            .map(|f| crate::spectral::gradient(f).l2_norm().powi(2))
            .sum();
        assert!(((eh - grad) / grad).abs() < 1e-13);
    }

    #[test]
    fn magnetic_only_dissipation() {
        let g = grid();
        let mut s = StateVector::zeros(g);
        s.b.c[0] = ScalarField::real_mode(g, [0, 1, 2], Complex64::new(0.3, 0.1)).unwrap();
        s.b.c[1] = ScalarField::real_mode(g, [0, 1, 2], Complex64::new(-0.6, -0.2)).unwrap();
        let d = dissipation(&s, &EnergyWeights::default());
        // |grad^2 B|_1^2 per mode: |k|^4 (1 + |k|^2) |B|^2
        let k2: f64 = 5.0;
        let want = k2 * k2 * (1.0 + k2) * s.b.l2_norm().powi(2);
        assert!(((d - want) / want).abs() < 1e-13);
    }

    #[test]
    fn homogeneity_and_affinity() {
        let s = sample_state();
        let w = EnergyWeights::default();
        let e1 = EnergyEvaluator::new(grid(), w).evaluate(&s);
        let e2 = EnergyEvaluator::new(grid(), w).evaluate(&s.scaled(3.0));
        assert!((e2.energy - 9.0 * e1.energy).abs() < 1e-12 * e2.energy);
        assert!((e2.dissipation_high - 9.0 * e1.dissipation_high).abs() < 1e-12 * e2.dissipation_high);
        let f = |k1: f64| energy_full(&s, &EnergyWeights::new(4, k1, 0.5).unwrap());
        let (a, b, c) = (f(0.0), f(0.02), f(0.04));
        assert!((b - 0.5 * (a + c)).abs() < 1e-12 * b);
    }

    #[test]
    fn equivalence_with_zero_kappas() {
        let w = EnergyWeights::new(4, 0.0, 0.0).unwrap();
        let (lo, hi) = equivalence_report(&w, &[sample_state()]).unwrap();
        assert!((lo - 1.0).abs() < 1e-14 && (hi - 1.0).abs() < 1e-14);
    }

    #[test]
    fn large_kappa_is_rejected() {
        assert!(matches!(EnergyWeights::new(4, 5.0, 0.5), Err(Error::WeightsTooLarge { .. })));
    }

    #[test]
    fn monitor_of_zero_trajectory() {
        let samples: Vec<_> = (0..10).map(|i| (i as f64, 0.0, 0.0)).collect();
        let rep = monitor_dissipation(&samples, 10.0).unwrap();
        assert_eq!(rep.violation_fraction, 0.0);
    }

    #[test]
    fn monitor_flags_growth() {
        let samples: Vec<_> = (0..10).map(|i| (i as f64, 1.0 + 0.1 * i as f64, 1.0)).collect();
        let rep = monitor_dissipation(&samples, 0.0).unwrap();
        assert_eq!(rep.violation_fraction, 1.0);
        assert!(rep.max_admissible_c < 0.0);
    }
}
