use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use nsm_core::energy::{EnergyEvaluator, EnergyWeights};
use nsm_core::model::{source_terms, PointState};
use nsm_core::semigroup::{full_generator, propagate_linear_mode};
use nsm_core::solver::{constraint_residuals, random_smooth_state, rhs, step};
use nsm_core::spectral::{
    curl, divergence, helmholtz_decompose, read_snapshot, sobolev_norm, write_snapshot, SpectralGrid,
};
use nsm_core::linalg::matrix_exponential_apply;
use nsm_core::ModelParams;

fn grid8() -> SpectralGrid {
    SpectralGrid::new(2.0 * PI, 8).unwrap()
}

fn xi_strategy() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-4.0f64..4.0).prop_filter("nonzero", |x| x.iter().map(|a| a * a).sum::<f64>() > 1e-4)
}

fn weighted_norm(v: &[Complex64; 11], p: &ModelParams) -> f64 {
    let w = |c: usize| match c {
        0 => p.alpha1,
        4 => p.alpha2 / p.alpha3,
        _ => 1.0,
    };
    v.iter().enumerate().map(|(c, z)| w(c) * z.norm_sqr()).sum::<f64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn linear_flow_is_a_semigroup(xi in xi_strategy(), t1 in 0.0f64..5.0, t2 in 0.0f64..5.0, seed in 0u64..1000) {
        let p = ModelParams::default();
        let v: [Complex64; 11] = std::array::from_fn(|c| Complex64::new(((seed + c as u64) as f64).sin(), ((seed * 3 + c as u64) as f64).cos()));
        let a = full_generator(xi, &p);
        let once = matrix_exponential_apply(&a, t1 + t2, &v).unwrap();
        let twice = matrix_exponential_apply(&a, t2, &matrix_exponential_apply(&a, t1, &v).unwrap()).unwrap();
        let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for c in 0..11 {
            prop_assert!((once[c] - twice[c]).norm() < 1e-10 * scale);
        }
    }

    #[test]
    fn linear_flow_does_not_increase_symmetrized_energy(xi in xi_strategy(), t in 0.0f64..20.0, seed in 0u64..1000) {
        let p = ModelParams::default();
        let v: [Complex64; 11] = std::array::from_fn(|c| Complex64::new(((seed * 7 + c as u64) as f64).cos(), ((seed + 2 * c as u64) as f64).sin()));
        let w = matrix_exponential_apply(&full_generator(xi, &p), t, &v).unwrap();
        prop_assert!(weighted_norm(&w, &p) <= weighted_norm(&v, &p) * (1.0 + 1e-12));
    }

    #[test]
    fn compatible_modes_stay_compatible(xi in xi_strategy(), t in 0.0f64..10.0, a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let p = ModelParams::default();
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        let mut v = [Complex64::default(); 11];
        v[0] = Complex64::new(a, b);
        // E = i xi n / |xi|^2 gives i xi . E = -n
        for d in 0..3 {
            v[5 + d] = Complex64::new(0.0, xi[d] / r2) * v[0];
        }
        v[1] = Complex64::new(b, 0.3);
        let w = propagate_linear_mode(xi, t, &v, &p).unwrap();
        let gauss: Complex64 = (0..3).map(|d| Complex64::new(0.0, xi[d]) * w[5 + d]).sum::<Complex64>() + w[0];
        let magnetic: Complex64 = (0..3).map(|d| Complex64::new(0.0, xi[d]) * w[8 + d]).sum();
        prop_assert!(gauss.norm() < 1e-10 && magnetic.norm() < 1e-10);
    }

    #[test]
    fn energy_is_quadratic(seed in 0u64..200, lambda in -3.0f64..3.0) {
        let g = grid8();
        let u = random_smooth_state(g, 0.05, seed).unwrap();
        let ev = EnergyEvaluator::new(g, EnergyWeights::default());
        let e1 = ev.evaluate(&u);
        let e2 = ev.evaluate(&u.scaled(lambda));
        let l2 = lambda * lambda;
        prop_assert!((e2.energy - l2 * e1.energy).abs() <= 1e-12 * l2 * e1.energy.abs() + 1e-300);
        prop_assert!((e2.dissipation - l2 * e1.dissipation).abs() <= 1e-12 * l2 * e1.dissipation + 1e-300);
    }

    #[test]
    fn sobolev_norm_is_monotone_in_order(seed in 0u64..200) {
        let u = random_smooth_state(grid8(), 0.05, seed).unwrap();
        let norms: Vec<f64> = (0..5).map(|m| sobolev_norm(&u, m)).collect();
        for w in norms.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn helmholtz_parts_are_orthogonal_and_complete(seed in 0u64..200) {
        let u = random_smooth_state(grid8(), 0.05, seed).unwrap();
        let (par, perp) = helmholtz_decompose(&u.u).unwrap();
        let size = u.u.l2_norm();
        prop_assert!(divergence(&perp).l2_norm() < 1e-13 * size);
        prop_assert!(curl(&par).l2_norm() < 1e-13 * size);
        prop_assert!(par.inner(&perp).abs() < 1e-13 * size * size);
        let mut sum = par.clone();
        sum.axpy(1.0, &perp);
        sum.axpy(-1.0, &u.u);
        prop_assert!(sum.l2_norm() < 1e-14 * size);
    }

    #[test]
    fn rhs_keeps_real_zero_mean_fields(seed in 0u64..100) {
        let u = random_smooth_state(grid8(), 0.02, seed).unwrap();
        let d = rhs(&u, &ModelParams::default()).unwrap();
        for f in d.fields() {
            prop_assert_eq!(f.mean(), Complex64::default());
            prop_assert!(f.hermitian_defect() < 1e-18);
        }
    }

    #[test]
    fn step_preserves_constraints(seed in 0u64..50) {
        let u = random_smooth_state(grid8(), 0.02, seed).unwrap();
        let v = step(&u, 0.01, &ModelParams::default()).unwrap();
        let (re, rb) = constraint_residuals(&v);
        prop_assert!(re < 1e-13 * v.l2_norm() && rb < 1e-13 * v.l2_norm());
    }

    #[test]
    fn snapshot_round_trip_is_bit_exact(seed in 0u64..50) {
        let u = random_smooth_state(grid8(), 0.02, seed).unwrap();
        let fields = u.fields();
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &fields).unwrap();
        let (g, back) = read_snapshot(buf.as_slice()).unwrap();
        prop_assert_eq!(g, grid8());
        for (a, b) in fields.iter().zip(&back) {
            prop_assert_eq!(a.coeffs(), b.coeffs());
        }
    }

    #[test]
    fn sources_vanish_at_rest_and_current_is_exact(n in -0.5f64..0.5, u in prop::array::uniform3(-1.0f64..1.0)) {
        let p = ModelParams::default();
        let s = PointState { n, u, ..PointState::default() };
        let out = source_terms(&s, &p).unwrap();
        for d in 0..3 {
            prop_assert_eq!(out.h4[d], n * u[d]);
        }
        let rest = source_terms(&PointState::default(), &p).unwrap();
        prop_assert_eq!(rest.h2, [0.0; 3]);
        prop_assert_eq!(rest.h3, 0.0);
    }
}
