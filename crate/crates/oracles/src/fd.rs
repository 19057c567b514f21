//! Right-hand side of the perturbation system by second-order centered differences.

use nsm_core::model::PressureLaw;
use nsm_core::spectral::{ScalarField, VectorField};
use nsm_core::state::StateVector;
use nsm_core::ModelParams;

use crate::dft;

struct Grid {
    n: usize,
    h: f64,
}

impl Grid {
    fn at(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    fn shift(&self, idx: usize, axis: usize, by: isize) -> usize {
        let n = self.n;
        let mut c = [idx / (n * n), (idx / n) % n, idx % n];
        c[axis] = (c[axis] as isize + by).rem_euclid(n as isize) as usize;
        self.at(c[0], c[1], c[2])
    }

    fn d(&self, f: &[f64], axis: usize) -> Vec<f64> {
        (0..f.len())
            .map(|x| (f[self.shift(x, axis, 1)] - f[self.shift(x, axis, -1)]) / (2.0 * self.h))
            .collect()
    }

    fn d2(&self, f: &[f64], a: usize, b: usize) -> Vec<f64> {
        if a == b {
            (0..f.len())
                .map(|x| (f[self.shift(x, a, 1)] - 2.0 * f[x] + f[self.shift(x, a, -1)]) / (self.h * self.h))
                .collect()
        } else {
            self.d(&self.d(f, a), b)
        }
    }

    fn lap(&self, f: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; f.len()];
        for a in 0..3 {
            for (o, v) in out.iter_mut().zip(self.d2(f, a, a)) {
                *o += v;
            }
        }
        out
    }
}

fn spectral(values: &[f64], like: &ScalarField) -> ScalarField {
    let g = like.grid();
    let mut c = dft::to_spectral(values, g.resolution());
    c[0] = Default::default();
    for (idx, z) in c.iter_mut().enumerate() {
        if g.is_nyquist(idx) {
            *z = Default::default();
        }
    }
    ScalarField::from_coeffs(g, c).expect("grid-sized")
}

/// Time derivative of `u` with every derivative replaced by a centered difference on the
/// collocation grid. Means and Nyquist planes of the result are removed to match the
/// zero-mean convention of the spectral evaluation.
pub fn fd_rhs_oracle(u: &StateVector, p: &ModelParams) -> StateVector {
    let g = u.grid();
    let gr = Grid { n: g.resolution(), h: g.spacing() };
    let phys: Vec<Vec<f64>> = u.fields().iter().map(|f| dft::to_physical(f.coeffs(), gr.n)).collect();
    let n = &phys[0];
    let v = [&phys[1], &phys[2], &phys[3]];
    let s = &phys[4];
    let e = [&phys[5], &phys[6], &phys[7]];
    let b = [&phys[8], &phys[9], &phys[10]];
    let len = n.len();

    let dv: Vec<Vec<Vec<f64>>> = (0..3).map(|i| (0..3).map(|j| gr.d(v[i], j)).collect()).collect();
    let div_v: Vec<f64> = (0..len).map(|x| dv[0][0][x] + dv[1][1][x] + dv[2][2][x]).collect();
    let dn: Vec<Vec<f64>> = (0..3).map(|j| gr.d(n, j)).collect();
    let ds: Vec<Vec<f64>> = (0..3).map(|j| gr.d(s, j)).collect();
    let lap_v: Vec<Vec<f64>> = (0..3).map(|i| gr.lap(v[i])).collect();
    // grad div v from mixed second differences
    let gdv: Vec<Vec<f64>> = (0..3)
        .map(|i| {
            let mut acc = vec![0.0; len];
            for j in 0..3 {
                for (a, w) in acc.iter_mut().zip(gr.d2(v[j], i, j)) {
                    *a += w;
                }
            }
            acc
        })
        .collect();
    let lap_s = gr.lap(s);
    let curl = |f: [&Vec<f64>; 3]| -> Vec<Vec<f64>> {
        let d = |c: usize, a: usize| gr.d(f[c], a);
        let (d21, d12, d02, d20, d10, d01) = (d(2, 1), d(1, 2), d(0, 2), d(2, 0), d(1, 0), d(0, 1));
        vec![
            (0..len).map(|x| d21[x] - d12[x]).collect(),
            (0..len).map(|x| d02[x] - d20[x]).collect(),
            (0..len).map(|x| d10[x] - d01[x]).collect(),
        ]
    };
    let curl_b = curl(b);
    let curl_e = curl(e);

    let mu = p.mu;
    let lam = p.mu + p.mu_prime;
    let mut rn = vec![0.0; len];
    let mut rv = vec![vec![0.0; len]; 3];
    let mut rs = vec![0.0; len];
    let mut re = vec![vec![0.0; len]; 3];
    let mut rb = vec![vec![0.0; len]; 3];
    let flux: Vec<Vec<f64>> = (0..3).map(|i| (0..len).map(|x| n[x] * v[i][x]).collect()).collect();
    let dflux: Vec<Vec<f64>> = (0..3).map(|i| gr.d(&flux[i], i)).collect();
    for x in 0..len {
        let rho = 1.0 + n[x];
        let theta = 1.0 + s[x];
        let (_, pr, pt) = p.pressure.evaluate(rho, theta);
        let vel = [v[0][x], v[1][x], v[2][x]];
        let mag = [b[0][x], b[1][x], b[2][x]];
        let lorentz = [
            vel[1] * mag[2] - vel[2] * mag[1],
            vel[2] * mag[0] - vel[0] * mag[2],
            vel[0] * mag[1] - vel[1] * mag[0],
        ];
        rn[x] = -div_v[x] - (dflux[0][x] + dflux[1][x] + dflux[2][x]);
        for i in 0..3 {
            let adv = vel[0] * dv[i][0][x] + vel[1] * dv[i][1][x] + vel[2] * dv[i][2][x];
            // full momentum balance divided by rho, written in perturbation form
            rv[i][x] = -adv - pr / rho * dn[i][x] - pt / rho * ds[i][x] - e[i][x] - lorentz[i]
                + mu / rho * lap_v[i][x]
                + lam / rho * gdv[i][x];
            re[i][x] = curl_b[i][x] + vel[i] * rho;
            rb[i][x] = -curl_e[i][x];
        }
        let mut strain = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                strain += (dv[i][j][x] + dv[j][i][x]).powi(2);
            }
        }
        let adv_s = vel[0] * ds[0][x] + vel[1] * ds[1][x] + vel[2] * ds[2][x];
        rs[x] = -adv_s - theta * pt / (p.c_nu * rho) * div_v[x]
            + p.kappa / (p.c_nu * rho) * lap_s[x]
            + mu / (2.0 * p.c_nu * rho) * strain
            + p.mu_prime / (p.c_nu * rho) * div_v[x] * div_v[x];
    }
    let like = &u.n;
    let vec_field = |c: &[Vec<f64>]| VectorField {
        c: [spectral(&c[0], like), spectral(&c[1], like), spectral(&c[2], like)],
    };
    StateVector {
        n: spectral(&rn, like),
        u: vec_field(&rv),
        sigma: spectral(&rs, like),
        e: vec_field(&re),
        b: vec_field(&rb),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nsm_core::spectral::SpectralGrid;
    use num_complex::Complex64;

    #[test]
    fn zero_state() {
        let g = SpectralGrid::new(1.0, 8).unwrap();
        let out = fd_rhs_oracle(&StateVector::zeros(g), &ModelParams::default());
        assert_eq!(out.max_abs_coeff(), 0.0);
    }

    #[test]
    fn current_is_formed_without_derivatives() {
        let g = SpectralGrid::new(2.0 * std::f64::consts::PI, 8).unwrap();
        let mut st = StateVector::zeros(g);
        st.n = ScalarField::real_mode(g, [1, 0, 0], Complex64::new(0.1, 0.0)).unwrap();
        st.u.c[1] = ScalarField::real_mode(g, [1, 0, 0], Complex64::new(0.2, 0.0)).unwrap();
        let out = fd_rhs_oracle(&st, &ModelParams::default());
        // n = 0.2 cos x, u2 = 0.4 cos x, so n u2 = 0.04 + 0.04 cos 2x
        let want_2 = 0.02;
        let m2 = g.index(2, 0, 0);
        assert!((out.e.c[1].coeffs()[m2].re - want_2).abs() < 1e-14);
    }
}
