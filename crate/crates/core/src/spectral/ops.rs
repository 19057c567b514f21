use num_complex::Complex64;

use super::field::{FieldComponents, ScalarField, VectorField};
use crate::error::Result;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn norm2(k: [f64; 3]) -> f64 {
    k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
}

pub fn gradient(f: &ScalarField) -> VectorField {
    VectorField { c: std::array::from_fn(|d| f.map_modes(|_, k, c| I * k[d] * c)) }
}

pub fn divergence(v: &VectorField) -> ScalarField {
    let g = v.grid();
    ScalarField::from_spectral_fn(g, |idx, k| {
        I * (k[0] * v.c[0].coeffs()[idx] + k[1] * v.c[1].coeffs()[idx] + k[2] * v.c[2].coeffs()[idx])
    })
}

pub fn curl(v: &VectorField) -> VectorField {
    let g = v.grid();
    let comp = |a: usize, b: usize| {
        // (i k_a) v_b - (i k_b) v_a
        ScalarField::from_spectral_fn(g, |idx, k| {
            I * (k[a] * v.c[b].coeffs()[idx] - k[b] * v.c[a].coeffs()[idx])
        })
    };
    VectorField { c: [comp(1, 2), comp(2, 0), comp(0, 1)] }
}

pub fn laplacian(f: &ScalarField) -> ScalarField {
    f.map_modes(|_, k, c| -norm2(k) * c)
}

pub fn vector_laplacian(v: &VectorField) -> VectorField {
    VectorField { c: std::array::from_fn(|d| laplacian(&v.c[d])) }
}

/// Solves `Delta g = f` for zero-mean `f`, returning the zero-mean solution.
pub fn inverse_laplacian(f: &ScalarField) -> Result<ScalarField> {
    f.require_zero_mean("inverse Laplacian input")?;
    Ok(f.map_modes(|_, k, c| {
        let k2 = norm2(k);
        if k2 == 0.0 {
            Complex64::default()
        } else {
            -c / k2
        }
    }))
}

fn inverse_laplacian_vector(v: &VectorField) -> Result<VectorField> {
    Ok(VectorField {
        c: [
            inverse_laplacian(&v.c[0])?,
            inverse_laplacian(&v.c[1])?,
            inverse_laplacian(&v.c[2])?,
        ],
    })
}

/// Splits a zero-mean vector field into its curl-free and divergence-free parts.
///
/// `u_par = Delta^{-1} grad div u` and `u_perp = -Delta^{-1} curl curl u`.
pub fn helmholtz_decompose(u: &VectorField) -> Result<(VectorField, VectorField)> {
    u.require_zero_mean("Helmholtz input")?;
    let u_par = inverse_laplacian_vector(&gradient(&divergence(u)))?;
    let u_perp = inverse_laplacian_vector(&curl(&curl(u)))?.scaled(-1.0);
    Ok((u_par, u_perp))
}

/// The curl-free field `E_par = (-Delta)^{-1} grad n`, so that `div E_par = -n`.
pub fn e_par_from_density(n: &ScalarField) -> Result<VectorField> {
    n.require_zero_mean("density")?;
    Ok(VectorField {
        c: std::array::from_fn(|d| {
            n.map_modes(|_, k, c| {
                let k2 = norm2(k);
                if k2 == 0.0 {
                    Complex64::default()
                } else {
                    I * k[d] * c / k2
                }
            })
        }),
    })
}

/// `sum_{|alpha| <= order} k^{2 alpha}`: the complete homogeneous symmetric polynomials of
/// `(k1^2, k2^2, k3^2)` of degrees `0..=order`, summed.
pub fn sobolev_weight(k: [f64; 3], order: usize) -> f64 {
    let x = [k[0] * k[0], k[1] * k[1], k[2] * k[2]];
    let mut total = 0.0;
    // h_j(x, y, z) = sum_a x^a h_{j-a}(y, z) and h_m(y, z) = sum_b y^b z^{m-b}.
    let mut pow_x = vec![1.0; order + 1];
    let mut pow_y = vec![1.0; order + 1];
    let mut pow_z = vec![1.0; order + 1];
    for j in 1..=order {
        pow_x[j] = pow_x[j - 1] * x[0];
        pow_y[j] = pow_y[j - 1] * x[1];
        pow_z[j] = pow_z[j - 1] * x[2];
    }
    for a in 0..=order {
        for b in 0..=order - a {
            for c in 0..=order - a - b {
                total += pow_x[a] * pow_y[b] * pow_z[c];
            }
        }
    }
    total
}

/// `H^k` norm via Plancherel, including the box-volume factor.
pub fn sobolev_norm<F: FieldComponents + ?Sized>(field: &F, order: usize) -> f64 {
    let mut sum = 0.0;
    let mut volume = 0.0;
    for f in field.components() {
        let g = f.grid();
        volume = g.volume();
        for (idx, c) in f.coeffs().iter().enumerate() {
            if *c != Complex64::default() {
                sum += sobolev_weight(g.wavevector(idx), order) * c.norm_sqr();
            }
        }
    }
    (volume * sum).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralGrid;
    use std::f64::consts::PI;

    fn grid() -> SpectralGrid {
        SpectralGrid::new(2.0 * PI, 8).unwrap()
    }

    #[test]
    fn gradient_of_constant_is_zero() {
        let g = grid();
        let mut f = ScalarField::zeros(g);
        f.coeffs_mut()[0] = Complex64::new(3.0, 0.0);
        let gr = gradient(&f);
        assert_eq!(gr.max_abs_coeff(), 0.0);
    }

    #[test]
    fn laplacian_of_single_mode() {
        let g = grid();
        let f = ScalarField::real_mode(g, [1, 2, -1], Complex64::new(1.0, 0.0)).unwrap();
        let l = laplacian(&f);
        let idx = g.index(1, 2, g.position(-1));
        assert!((l.coeffs()[idx] + Complex64::new(6.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn e_par_single_mode() {
        let g = grid();
        let mut n = ScalarField::zeros(g);
        let idx = g.index(1, 1, 0);
        n.coeffs_mut()[idx] = Complex64::new(1.0, 0.0);
        let e = e_par_from_density(&n).unwrap();
        assert!((e.c[0].coeffs()[idx] - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!((e.c[1].coeffs()[idx] - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert_eq!(e.c[2].coeffs()[idx], Complex64::default());
        let zero = e_par_from_density(&ScalarField::zeros(g)).unwrap();
        assert_eq!(zero.max_abs_coeff(), 0.0);
    }

    #[test]
    fn nonzero_mean_is_rejected() {
        let g = grid();
        let mut f = ScalarField::zeros(g);
        f.coeffs_mut()[0] = Complex64::new(1.0, 0.0);
        assert!(inverse_laplacian(&f).is_err());
        assert!(e_par_from_density(&f).is_err());
    }

    #[test]
    fn sobolev_weight_values() {
        assert_eq!(sobolev_weight([0.0, 0.0, 0.0], 3), 1.0);
        assert_eq!(sobolev_weight([2.0, 0.0, 0.0], 1), 5.0);
        // 1 + (1 + 1 + 1) + (1 + 1 + 1 + 1 + 1 + 1)
        assert_eq!(sobolev_weight([1.0, 1.0, 1.0], 2), 10.0);
    }

    #[test]
    fn sobolev_norm_of_single_mode() {
        let g = grid();
        let mut f = ScalarField::zeros(g);
        let idx = g.index(1, 2, 0);
        let a = 0.25;
        f.coeffs_mut()[idx] = Complex64::new(a, 0.0);
        let want = a * (1.0 + 5.0f64).sqrt() * g.volume().sqrt();
        assert!((sobolev_norm(&f, 1) - want).abs() < 1e-14 * want);
        assert_eq!(sobolev_norm(&ScalarField::zeros(g), 3), 0.0);
    }
}
