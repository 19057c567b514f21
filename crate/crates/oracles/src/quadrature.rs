//! Composite trapezoid rule with panel doubling.

use crate::{OracleError, Result};

const MAX_LEVEL: u32 = 24;

/// `int_0^R f(r) dr`, doubling the panel count until successive values agree to `rel_tol`
/// (default use: `1e-9`).
pub fn quadrature_refinement_oracle(mut f: impl FnMut(f64) -> f64, r: f64, rel_tol: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(OracleError::InvalidInput(format!("upper limit must be positive, got {r}")));
    }
    let mut panels = 16usize;
    let mut h = r / panels as f64;
    let mut sum = 0.5 * (f(0.0) + f(r)) + (1..panels).map(|j| f(j as f64 * h)).sum::<f64>();
    let mut value = sum * h;
    let mut change = f64::INFINITY;
    for _ in 0..MAX_LEVEL {
        // new midpoints only
        let mid: f64 = (0..panels).map(|j| f((j as f64 + 0.5) * h)).sum();
        sum += mid;
        panels *= 2;
        h *= 0.5;
        let next = sum * h;
        change = (next - value).abs();
        value = next;
        if change <= rel_tol * value.abs() {
            return Ok(value);
        }
    }
    Err(OracleError::NoConvergence { points: panels + 1, change: change / value.abs() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_moment() {
        let v = quadrature_refinement_oracle(|r| r * r * (-r * r).exp(), 12.0, 1e-9).unwrap();
        assert!((v - std::f64::consts::PI.sqrt() / 4.0).abs() < 1e-9);
    }

    #[test]
    fn zero_integrand() {
        assert_eq!(quadrature_refinement_oracle(|_| 0.0, 5.0, 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn bad_limit() {
        assert!(quadrature_refinement_oracle(|r| r, -1.0, 1e-9).is_err());
    }
}
