//! `e^{At} v` by adaptive Dormand-Prince 5(4) integration of `v' = Av`.

use nalgebra::{DMatrix, DVector};
use nsm_core::ModelParams;
use num_complex::Complex64;

use crate::{OracleError, Result};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-12, atol: 1e-15, max_steps: 5_000_000 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `v' = Av` from 0 to `t` with default tolerances.
pub fn expm_ode_oracle(a: &DMatrix<Complex64>, t: f64, v: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    expm_ode_with(a, t, v, &OdeOptions::default())
}

pub fn expm_ode_with(
    a: &DMatrix<Complex64>,
    t: f64,
    v: &DVector<Complex64>,
    opts: &OdeOptions,
) -> Result<DVector<Complex64>> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(OracleError::InvalidInput(format!("t must be finite and >= 0, got {t}")));
    }
    if !a.is_square() || a.nrows() != v.len() {
        return Err(OracleError::InvalidInput("dimension mismatch".into()));
    }
    let mut y = v.clone();
    if t == 0.0 {
        return Ok(y);
    }
    let norm = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let mut h = (0.1 / norm).min(t);
    let mut s = 0.0;
    let mut k: Vec<DVector<Complex64>> = vec![DVector::zeros(v.len()); 7];
    k[0] = a * &y;
    for _ in 0..opts.max_steps {
        if s >= t {
            return Ok(y);
        }
        if h < 1e-14 * t.max(1.0) {
            return Err(OracleError::Stiffness { t: s, h });
        }
        h = h.min(t - s);
        for st in 1..7 {
            let mut arg = y.clone();
            for (j, kj) in k.iter().enumerate().take(st) {
                if A[st][j] != 0.0 {
                    arg.axpy(Complex64::new(h * A[st][j], 0.0), kj, Complex64::new(1.0, 0.0));
                }
            }
            debug_assert!(C[st] > 0.0);
            k[st] = a * &arg;
        }
        let mut y5 = y.clone();
        let mut err = DVector::<Complex64>::zeros(v.len());
        for j in 0..7 {
            y5.axpy(Complex64::new(h * B5[j], 0.0), &k[j], Complex64::new(1.0, 0.0));
            err.axpy(Complex64::new(h * (B5[j] - B4[j]), 0.0), &k[j], Complex64::new(1.0, 0.0));
        }
        let scale = y.iter().zip(y5.iter()).map(|(p, q)| p.norm().max(q.norm())).fold(0.0, f64::max);
        let sc = opts.atol + opts.rtol * scale;
        let e = err.iter().map(|z| z.norm() / sc).fold(0.0, f64::max);
        if e <= 1.0 {
            s += h;
            y = y5;
            // First-same-as-last: stage 7 is the derivative at the new point.
            k[0] = k[6].clone();
        }
        let fac = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
    }
    Err(OracleError::Stiffness { t: s, h })
}

/// Generator of the linearized system at wavevector `xi`, ordered
/// `(n, u1, u2, u3, sigma, E1, E2, E3, B1, B2, B3)`, assembled from operator blocks.
pub fn generator_matrix(xi: [f64; 3], p: &ModelParams) -> DMatrix<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let grad: Vec<Complex64> = xi.iter().map(|&x| i * x).collect();
    let k2: f64 = xi.iter().map(|x| x * x).sum();
    // curl as a matrix: (i xi) x v
    let curl = DMatrix::from_row_slice(3, 3, &[
        Complex64::default(), -grad[2], grad[1],
        grad[2], Complex64::default(), -grad[0],
        -grad[1], grad[0], Complex64::default(),
    ]);
    let mut m = DMatrix::<Complex64>::zeros(11, 11);
    let re = |x: f64| Complex64::new(x, 0.0);
    for d in 0..3 {
        // continuity: n' = -div u
        m[(0, 1 + d)] = -grad[d];
        // momentum
        m[(1 + d, 0)] = -p.alpha1 * grad[d];
        m[(1 + d, 4)] = -p.alpha2 * grad[d];
        m[(1 + d, 5 + d)] = re(-1.0);
        m[(1 + d, 1 + d)] += re(-p.mu * k2);
        for e in 0..3 {
            // (mu + mu') grad div u
            m[(1 + d, 1 + e)] += re(p.mu + p.mu_prime) * grad[d] * grad[e];
        }
        // energy
        m[(4, 1 + d)] = -p.alpha3 * grad[d];
        // Ampere: E' = curl B + u
        m[(5 + d, 1 + d)] = re(1.0);
        for e in 0..3 {
            m[(5 + d, 8 + e)] = curl[(d, e)];
            m[(8 + d, 5 + e)] = -curl[(d, e)];
        }
    }
    m[(4, 4)] = re(-p.kappa / p.c_nu * k2);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn nilpotent_example() {
        let a = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        let v = DVector::from_vec(vec![c(0.0), c(1.0)]);
        let w = expm_ode_oracle(&a, 3.0, &v).unwrap();
        assert!((w[0] - c(3.0)).norm() < 1e-12);
        assert!((w[1] - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn diagonal_example() {
        let d = [-1.0, 0.5, -3.0];
        let a = DMatrix::from_diagonal(&DVector::from_iterator(3, d.iter().map(|&x| c(x))));
        let v = DVector::from_element(3, c(1.0));
        let w = expm_ode_oracle(&a, 2.0, &v).unwrap();
        for j in 0..3 {
            let want = (d[j] * 2.0).exp();
            assert!((w[j] - c(want)).norm() < 1e-12 * want.max(1.0));
        }
    }

    #[test]
    fn negative_time_rejected() {
        let a = DMatrix::from_element(1, 1, c(1.0));
        let v = DVector::from_element(1, c(1.0));
        assert!(matches!(expm_ode_oracle(&a, -1.0, &v), Err(OracleError::InvalidInput(_))));
    }

    #[test]
    fn extreme_stiffness_reports_underflow() {
        let a = DMatrix::from_element(1, 1, c(-1e18));
        let v = DVector::from_element(1, c(1.0));
        let opts = OdeOptions { max_steps: 1000, ..OdeOptions::default() };
        assert!(matches!(expm_ode_with(&a, 1.0, &v, &opts), Err(OracleError::Stiffness { .. })));
    }
}
