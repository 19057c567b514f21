use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::model::ModelParams;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn norm2(xi: [f64; 3]) -> f64 {
    xi.iter().map(|x| x * x).sum()
}

/// Levi-Civita symbol.
fn eps(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Writes the matrix of `v -> i xi x v` scaled by `s` into `m` at block offset `(r0, c0)`.
fn put_cross<const N: usize>(m: &mut CMat<N>, r0: usize, c0: usize, xi: [f64; 3], s: f64) {
    for k in 0..3 {
        for mm in 0..3 {
            let v: f64 = (0..3).map(|l| eps(k, l, mm) * xi[l]).sum();
            m[(r0 + k, c0 + mm)] += I * (s * v);
        }
    }
}

/// Fluid symbol over `(n, u1, u2, u3, sigma)` with `E_par` eliminated through the density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidSymbol {
    pub xi: [f64; 3],
    pub matrix: CMat<5>,
}

impl FluidSymbol {
    pub fn new(xi: [f64; 3], p: &ModelParams) -> Result<Self> {
        let r2 = norm2(xi);
        if !(r2 > 0.0) || !r2.is_finite() {
            return Err(Error::Domain(format!("fluid symbol needs 0 < |xi| < inf, got {xi:?}")));
        }
        let mut m = CMat::<5>::zeros();
        for k in 0..3 {
            m[(0, 1 + k)] = -I * xi[k];
            m[(1 + k, 0)] = -I * xi[k] * (p.alpha1 + 1.0 / r2);
            for l in 0..3 {
                let diag = if k == l { p.mu * r2 } else { 0.0 };
                m[(1 + k, 1 + l)] = c(-diag - p.mu_bulk() * xi[k] * xi[l]);
            }
            m[(1 + k, 4)] = -I * xi[k] * p.alpha2;
            m[(4, 1 + k)] = -I * xi[k] * p.alpha3;
        }
        m[(4, 4)] = c(-p.kappa_bar * r2);
        Ok(FluidSymbol { xi, matrix: m })
    }
}

/// Electromagnetic symbol over `(u_perp, E_perp, B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmSymbol {
    pub xi: [f64; 3],
    pub matrix: CMat<9>,
}

impl EmSymbol {
    pub fn new(xi: [f64; 3], p: &ModelParams) -> Self {
        let r2 = norm2(xi);
        let mut m = CMat::<9>::zeros();
        for k in 0..3 {
            m[(k, k)] = c(-p.mu * r2);
            m[(k, 3 + k)] = c(-1.0);
            m[(3 + k, k)] = c(1.0);
        }
        put_cross(&mut m, 3, 6, xi, 1.0);
        put_cross(&mut m, 6, 3, xi, -1.0);
        EmSymbol { xi, matrix: m }
    }
}

/// Generator of the full linearization over `(n, u, sigma, E, B)`, valid for every `xi`.
pub fn full_generator(xi: [f64; 3], p: &ModelParams) -> CMat<11> {
    let r2 = norm2(xi);
    let mut m = CMat::<11>::zeros();
    for k in 0..3 {
        m[(0, 1 + k)] = -I * xi[k];
        m[(1 + k, 0)] = -I * xi[k] * p.alpha1;
        for l in 0..3 {
            let diag = if k == l { p.mu * r2 } else { 0.0 };
            m[(1 + k, 1 + l)] = c(-diag - p.mu_bulk() * xi[k] * xi[l]);
        }
        m[(1 + k, 4)] = -I * xi[k] * p.alpha2;
        m[(1 + k, 5 + k)] = c(-1.0);
        m[(4, 1 + k)] = -I * xi[k] * p.alpha3;
        m[(5 + k, 1 + k)] = c(1.0);
    }
    m[(4, 4)] = c(-p.kappa_bar * r2);
    put_cross(&mut m, 5, 8, xi, 1.0);
    put_cross(&mut m, 8, 5, xi, -1.0);
    m
}

/// Fluid symbol at `xi = r e1` restricted to `(n, v, sigma)` with `v = u1`.
pub fn longitudinal_reduced(r: f64, p: &ModelParams) -> Result<CMat<3>> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("reduced fluid symbol needs 0 < r < inf, got {r}")));
    }
    let r2 = r * r;
    Ok(CMat([
        [c(0.0), -I * r, c(0.0)],
        [-I * (p.alpha1 * r + 1.0 / r), c(-(p.mu + p.mu_bulk()) * r2), -I * (p.alpha2 * r)],
        [c(0.0), -I * (p.alpha3 * r), c(-p.kappa_bar * r2)],
    ]))
}

/// Electromagnetic symbol at `xi = r e1` restricted to the polarization `(u2, E2, B3)`.
///
/// The companion polarization `(u3, E3, B2)` obeys the same system with `B` negated.
pub fn transverse_reduced(r: f64, p: &ModelParams) -> CMat<3> {
    CMat([
        [c(-p.mu * r * r), c(-1.0), c(0.0)],
        [c(1.0), c(0.0), -I * r],
        [c(0.0), -I * r, c(0.0)],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigenvalues, expm};

    #[test]
    fn fluid_symbol_entries_at_unit_frequency() {
        let p = ModelParams::default();
        let m = FluidSymbol::new([1.0, 0.0, 0.0], &p).unwrap().matrix;
        let close = |a: Complex64, b: Complex64| (a - b).norm() < 1e-15;
        assert!(close(m[(0, 1)], -I));
        assert!(close(m[(1, 0)], -I * 2.0));
        assert!(close(m[(1, 1)], c(-2.0)));
        assert!(close(m[(2, 2)], c(-1.0)));
        assert!(close(m[(3, 3)], c(-1.0)));
        assert!(close(m[(4, 1)], -I * (2.0 / 3.0)));
        assert!(close(m[(4, 4)], c(-2.0 / 3.0)));
    }

    #[test]
    fn fluid_symbol_rejects_zero_frequency() {
        assert!(FluidSymbol::new([0.0; 3], &ModelParams::default()).is_err());
    }

    #[test]
    fn transverse_velocity_decouples() {
        let p = ModelParams::default();
        let xi = [0.3, -1.2, 0.7];
        let m = FluidSymbol::new(xi, &p).unwrap().matrix;
        // w is orthogonal to xi
        let w = [1.2, 0.3, 0.0];
        let v = [c(0.0), c(w[0]), c(w[1]), c(w[2]), c(0.0)];
        let out = m.matvec(&v);
        let r2 = norm2(xi);
        for k in 0..5 {
            assert!((out[k] - v[k] * (-p.mu * r2)).norm() < 1e-14);
        }
    }

    #[test]
    fn em_symbol_at_zero_frequency() {
        let m = EmSymbol::new([0.0; 3], &ModelParams::default()).matrix;
        for k in 0..3 {
            assert_eq!(m[(k, 3 + k)], c(-1.0));
            assert_eq!(m[(3 + k, k)], c(1.0));
            assert_eq!(m[(k, k)], c(0.0));
            for j in 0..9 {
                assert_eq!(m[(6 + k, j)], c(0.0));
            }
        }
    }

    #[test]
    fn reduced_systems_match_full_symbols() {
        let p = ModelParams::new(0.7, 0.2, 1.3, 1.1, Default::default()).unwrap();
        for r in [0.01, 0.4, 3.0, 25.0] {
            for t in [0.5, 7.0] {
                let full = expm(&FluidSymbol::new([r, 0.0, 0.0], &p).unwrap().matrix.scale_real(t))
                    .unwrap();
                let red = expm(&longitudinal_reduced(r, &p).unwrap().scale_real(t)).unwrap();
                let map = [0, 1, 4];
                for i in 0..3 {
                    for j in 0..3 {
                        let d = (full[(map[i], map[j])] - red[(i, j)]).norm();
                        assert!(d < 1e-10 * full.frobenius());
                    }
                }
                let full = expm(&EmSymbol::new([r, 0.0, 0.0], &p).matrix.scale_real(t)).unwrap();
                let red = expm(&transverse_reduced(r, &p).scale_real(t)).unwrap();
                let map = [1, 4, 8];
                for i in 0..3 {
                    for j in 0..3 {
                        let d = (full[(map[i], map[j])] - red[(i, j)]).norm();
                        assert!(d < 1e-10 * full.frobenius());
                    }
                }
            }
        }
    }

    #[test]
    fn full_generator_preserves_constraints() {
        let p = ModelParams::default();
        let xi = [0.4, -1.0, 2.0];
        let m = full_generator(xi, &p);
        // d/dt (i xi . E + n) and d/dt (xi . B) are identically zero rows.
        for j in 0..11 {
            let mut g = m[(0, j)];
            let mut h = Complex64::default();
            for k in 0..3 {
                g += I * xi[k] * m[(5 + k, j)];
                h += m[(8 + k, j)] * xi[k];
            }
            assert!(g.norm() < 1e-14 && h.norm() < 1e-14);
        }
    }

    #[test]
    fn spectra_are_stable() {
        let p = ModelParams::default();
        for e in -30..=30 {
            let r = 10f64.powf(e as f64 / 10.0);
            let xi = [r * 0.6, r * 0.0, r * 0.8];
            let ev = eigenvalues(&FluidSymbol::new(xi, &p).unwrap().matrix).unwrap();
            let scale = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(ev.iter().all(|z| z.re <= 1e-12 * scale), "fluid r = {r}: {ev:?}");
            let ev = eigenvalues(&EmSymbol::new(xi, &p).matrix).unwrap();
            let scale = ev.iter().map(|z| z.norm()).fold(1.0, f64::max);
            assert!(ev.iter().all(|z| z.re <= 1e-12 * scale), "em r = {r}: {ev:?}");
        }
    }
}
