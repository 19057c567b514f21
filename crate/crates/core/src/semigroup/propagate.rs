use num_complex::Complex64;

use super::symbols::{transverse_reduced, EmSymbol, FluidSymbol};
use crate::error::{Error, Result};
use crate::linalg::{expm, CMat};
use crate::model::ModelParams;
use crate::state::STATE_DIM;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance on the mode-wise constraints `i xi . E + n = 0`, `xi . B = 0`.
const COMPATIBILITY_TOL: f64 = 1e-10;

/// `exp(A t)` for a matrix whose first row/column couple through a factor `|xi|`.
///
/// The density is rescaled by `|xi|` before exponentiating so that the `1/|xi|` entries of
/// the symbol do not dominate the scaling-and-squaring error at small frequencies.
fn balanced_expm<const N: usize>(a: &CMat<N>, r: f64, t: f64) -> Result<CMat<N>> {
    let mut b = a.scale_real(t);
    for j in 1..N {
        b[(0, j)] /= r;
        b[(j, 0)] *= r;
    }
    let mut e = expm(&b)?;
    for j in 1..N {
        e[(0, j)] *= r;
        e[(j, 0)] /= r;
    }
    Ok(e)
}

/// `exp(A(i xi) t)` for the 5x5 fluid symbol.
pub fn fluid_propagator(xi: [f64; 3], t: f64, p: &ModelParams) -> Result<CMat<5>> {
    check_time(t)?;
    let sym = FluidSymbol::new(xi, p)?;
    let r = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    balanced_expm(&sym.matrix, r, t)
}

/// `exp(L t)` for the reduced longitudinal system `(n, v, sigma)` at radius `r`.
pub(crate) fn longitudinal_propagator(r: f64, t: f64, p: &ModelParams) -> Result<CMat<3>> {
    let a = super::symbols::longitudinal_reduced(r, p)?;
    balanced_expm(&a, r, t)
}

/// `exp(T t)` for the reduced transverse polarization `(u, E, B)` at radius `r`.
pub fn transverse_propagator(r: f64, t: f64, p: &ModelParams) -> Result<CMat<3>> {
    check_time(t)?;
    expm(&transverse_reduced(r, p).scale_real(t))
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("propagation time must be finite and >= 0, got {t}")));
    }
    Ok(())
}

fn dot(a: [f64; 3], b: [Complex64; 3]) -> Complex64 {
    b[0] * a[0] + b[1] * a[1] + b[2] * a[2]
}

/// Propagates one compatible Fourier mode `(n, u, sigma, E, B)` over time `t` through the
/// fluid/electromagnetic splitting.
pub fn propagate_linear_mode(
    xi: [f64; 3],
    t: f64,
    v: &[Complex64; STATE_DIM],
    p: &ModelParams,
) -> Result<[Complex64; STATE_DIM]> {
    check_time(t)?;
    let r2: f64 = xi.iter().map(|x| x * x).sum();
    if !(r2 > 0.0) {
        return Err(Error::Domain("the zero mode has no linear propagator".into()));
    }
    let r = r2.sqrt();
    let n = v[0];
    let u = [v[1], v[2], v[3]];
    let sigma = v[4];
    let e = [v[5], v[6], v[7]];
    let b = [v[8], v[9], v[10]];

    let size = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = COMPATIBILITY_TOL * size * r.max(1.0);
    let gauss = I * dot(xi, e) + n;
    let solenoidal = dot(xi, b);
    if gauss.norm() > tol || solenoidal.norm() > tol {
        return Err(Error::Constraint(format!(
            "incompatible mode: |i xi.E + n| = {:e}, |xi.B| = {:e}",
            gauss.norm(),
            solenoidal.norm()
        )));
    }
    if t == 0.0 {
        return Ok(*v);
    }

    let w = xi.map(|x| x / r);
    let u_long = dot(w, u);
    let e_long = dot(w, e);
    let u_perp: [Complex64; 3] = std::array::from_fn(|k| u[k] - u_long * w[k]);
    let e_perp: [Complex64; 3] = std::array::from_fn(|k| e[k] - e_long * w[k]);

    let fluid = fluid_propagator(xi, t, p)?;
    let f_in = [n, u_long * w[0], u_long * w[1], u_long * w[2], sigma];
    let f_out = fluid.matvec(&f_in);

    let em = expm(&EmSymbol::new(xi, p).matrix.scale_real(t))?;
    let m_in = [u_perp[0], u_perp[1], u_perp[2], e_perp[0], e_perp[1], e_perp[2], b[0], b[1], b[2]];
    let m_out = em.matvec(&m_in);

    let n_t = f_out[0];
    let mut out = [Complex64::default(); STATE_DIM];
    out[0] = n_t;
    out[4] = f_out[4];
    for k in 0..3 {
        out[1 + k] = f_out[1 + k] + m_out[k];
        out[5 + k] = I * xi[k] * n_t / r2 + m_out[3 + k];
        out[8 + k] = m_out[6 + k];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::full_generator;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn compatible_mode(xi: [f64; 3]) -> [Complex64; STATE_DIM] {
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        let n = c(0.3, -0.1);
        // E = i xi n / |xi|^2 + E_perp with E_perp orthogonal to xi
        let perp = [xi[1], -xi[0], 0.0];
        let mut v = [Complex64::default(); STATE_DIM];
        v[0] = n;
        v[1] = c(0.2, 0.5);
        v[2] = c(-0.4, 0.1);
        v[3] = c(0.0, 0.3);
        v[4] = c(0.7, 0.0);
        for k in 0..3 {
            v[5 + k] = I * xi[k] * n / r2 + c(0.25, -0.5) * perp[k];
            v[8 + k] = c(-0.6, 0.2) * perp[k];
        }
        v
    }

    #[test]
    fn zero_time_is_identity() {
        let p = ModelParams::default();
        let xi = [0.5, 1.0, -0.25];
        let v = compatible_mode(xi);
        assert_eq!(propagate_linear_mode(xi, 0.0, &v, &p).unwrap(), v);
    }

    #[test]
    fn agrees_with_full_generator() {
        let p = ModelParams::default();
        for xi in [[0.5, 1.0, -0.25], [0.01, 0.02, 0.0], [3.0, -4.0, 12.0]] {
            let v = compatible_mode(xi);
            let out = propagate_linear_mode(xi, 5.0, &v, &p).unwrap();
            let full = expm(&full_generator(xi, &p).scale_real(5.0)).unwrap().matvec(&v);
            let scale = full.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for k in 0..STATE_DIM {
                assert!((out[k] - full[k]).norm() < 1e-10 * scale, "xi {xi:?} comp {k}");
            }
        }
    }

    #[test]
    fn transverse_data_leaves_fluid_block_zero() {
        let p = ModelParams::default();
        let xi = [1.0, 2.0, 0.0];
        let perp = [2.0, -1.0, 0.0];
        let mut v = [Complex64::default(); STATE_DIM];
        for k in 0..3 {
            v[1 + k] = c(perp[k], 0.0);
            v[5 + k] = c(0.0, perp[k]);
            v[8 + k] = c(0.5 * perp[k], 0.0);
        }
        let out = propagate_linear_mode(xi, 3.0, &v, &p).unwrap();
        assert_eq!(out[0], Complex64::default());
        assert_eq!(out[4], Complex64::default());
        let along: Complex64 = (0..3).map(|k| out[1 + k] * xi[k]).sum();
        assert!(along.norm() < 1e-14);
    }

    #[test]
    fn incompatible_mode_is_rejected() {
        let p = ModelParams::default();
        let mut v = [Complex64::default(); STATE_DIM];
        v[0] = c(1.0, 0.0);
        assert!(matches!(
            propagate_linear_mode([1.0, 0.0, 0.0], 1.0, &v, &p),
            Err(Error::Constraint(_))
        ));
    }
}
