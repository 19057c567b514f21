//! Energy and dissipation functionals as explicit multi-index sums of physical-space
//! inner products.

use nsm_core::energy::EnergyWeights;
use nsm_core::spectral::ScalarField;
use nsm_core::state::StateVector;
use num_complex::Complex64;

use crate::dft;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DirectEnergy {
    pub energy: f64,
    pub energy_high: f64,
    pub dissipation: f64,
    pub dissipation_high: f64,
}

fn multi_indices(lo: i64, hi: i64) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    if hi < 0 {
        return out;
    }
    let hi = hi as u32;
    for a in 0..=hi {
        for b in 0..=hi - a {
            for c in 0..=hi - a - b {
                if (a + b + c) as i64 >= lo {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

fn all_tuples(len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..3).map(move |d| {
                    let mut t = t.clone();
                    t.push(d);
                    t
                })
            })
            .collect();
    }
    out
}

struct Ctx {
    n: usize,
    cell: f64,
    k: Vec<[f64; 3]>,
}

impl Ctx {
    /// Physical values of `d^alpha d_extra f`.
    fn deriv(&self, f: &ScalarField, alpha: [u32; 3], extra: &[usize]) -> Vec<f64> {
        let i = Complex64::new(0.0, 1.0);
        let c: Vec<Complex64> = f
            .coeffs()
            .iter()
            .zip(&self.k)
            .map(|(z, k)| {
                let mut m = *z;
                for d in 0..3 {
                    for _ in 0..alpha[d] {
                        m *= i * k[d];
                    }
                }
                for &d in extra {
                    m *= i * k[d];
                }
                m
            })
            .collect();
        dft::to_physical(&c, self.n)
    }

    fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.cell * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
    }

    fn sq_sum(&self, f: &ScalarField, alphas: &[[u32; 3]], grads: usize) -> f64 {
        let mut s = 0.0;
        for a in alphas {
            for t in all_tuples(grads) {
                let v = self.deriv(f, *a, &t);
                s += self.inner(&v, &v);
            }
        }
        s
    }

    fn curl(&self, f: [&ScalarField; 3], alpha: [u32; 3]) -> [Vec<f64>; 3] {
        std::array::from_fn(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let a = self.deriv(f[k], alpha, &[j]);
            let b = self.deriv(f[j], alpha, &[k]);
            a.iter().zip(&b).map(|(x, y)| x - y).collect()
        })
    }

    fn cross_terms(&self, u: &StateVector, w: &EnergyWeights, shift: i64) -> f64 {
        let n = w.order as i64;
        let uf = [&u.u.c[0], &u.u.c[1], &u.u.c[2]];
        let ef = [&u.e.c[0], &u.e.c[1], &u.e.c[2]];
        let bf = [&u.b.c[0], &u.b.c[1], &u.b.c[2]];
        let mut x1 = 0.0;
        for a in multi_indices(shift, n - 1) {
            for i in 0..3 {
                x1 += self.inner(&self.deriv(uf[i], a, &[]), &self.deriv(&u.n, a, &[i]));
            }
        }
        let mut x2 = 0.0;
        for a in multi_indices(shift, n - 2) {
            let cu = self.curl(uf, a);
            let ce = self.curl(ef, a);
            x2 += (0..3).map(|i| self.inner(&cu[i], &ce[i])).sum::<f64>();
        }
        let mut x3 = 0.0;
        for a in multi_indices(1 + shift, n - 2) {
            let cb = self.curl(bf, a);
            x3 += (0..3).map(|i| self.inner(&self.deriv(ef[i], a, &[]), &cb[i])).sum::<f64>();
        }
        w.kappa1 * x1 + w.kappa1 * x2 - w.kappa1 * w.kappa2 * x3
    }
}

/// All four functionals of `u` by direct summation; intended for grids of at most `8^3`.
pub fn energy_direct(u: &StateVector, w: &EnergyWeights) -> DirectEnergy {
    let g = u.grid();
    let n = w.order as i64;
    let ctx = Ctx {
        n: g.resolution(),
        cell: g.spacing().powi(3),
        k: g.wavevectors(),
    };
    let fields = u.fields();
    let upto = |m: i64| multi_indices(0, m);
    let mass = |alphas: &[[u32; 3]], grads: usize| fields.iter().map(|f| ctx.sq_sum(f, alphas, grads)).sum::<f64>();
    let vel = [&u.u.c[0], &u.u.c[1], &u.u.c[2]];
    let ef = [&u.e.c[0], &u.e.c[1], &u.e.c[2]];
    let bf = [&u.b.c[0], &u.b.c[1], &u.b.c[2]];
    let group = |fs: &[&ScalarField], alphas: &[[u32; 3]], grads: usize| {
        fs.iter().map(|f| ctx.sq_sum(f, alphas, grads)).sum::<f64>()
    };

    let energy = mass(&upto(n), 0) + ctx.cross_terms(u, w, 0);
    let energy_high = mass(&upto(n - 1), 1) + ctx.cross_terms(u, w, 1);
    let dissipation = group(&vel, &upto(n), 1)
        + ctx.sq_sum(&u.n, &upto(n), 0)
        + ctx.sq_sum(&u.sigma, &upto(n), 1)
        + group(&ef, &upto(n - 2), 1)
        + group(&bf, &upto(n - 3), 2);
    let dissipation_high = group(&vel, &upto(n - 1), 2)
        + ctx.sq_sum(&u.n, &upto(n - 1), 1)
        + ctx.sq_sum(&u.sigma, &upto(n - 1), 2)
        + group(&ef, &upto(n - 3), 2)
        + group(&bf, &upto(n - 4), 3);
    DirectEnergy { energy, energy_high, dissipation, dissipation_high }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(0, 0).len(), 1);
        assert_eq!(multi_indices(0, 2).len(), 10);
        assert_eq!(multi_indices(1, 2).len(), 9);
        assert!(multi_indices(0, -1).is_empty());
        assert_eq!(all_tuples(2).len(), 9);
    }

    #[test]
    fn zero_state() {
        let g = nsm_core::spectral::SpectralGrid::new(1.0, 8).unwrap();
        let e = energy_direct(&StateVector::zeros(g), &EnergyWeights::default());
        assert_eq!(e, DirectEnergy::default());
    }
}
