//! Fast paths against the independent implementations in `nsm-oracles`.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nsm_core::energy::{EnergyEvaluator, EnergyWeights};
use nsm_core::linalg::{eigenvalues, matrix_exponential_apply, CMat};
use nsm_core::semigroup::{
    full_generator, propagate_linear_mode, whole_space_l2, Component, Family, FluidSymbol, QuadratureOptions,
};
use nsm_core::solver::{init_compatible, random_smooth_state, rhs};
use nsm_core::spectral::{ScalarField, SpectralGrid, VectorField};
use nsm_core::state::StateVector;
use nsm_core::ModelParams;
use nsm_oracles::{
    dense_eigenvalues, energy_direct, expm_ode_oracle, fd_rhs_oracle, generator_matrix,
    quadrature_refinement_oracle, to_dmatrix,
};

fn dvec<const N: usize>(v: &[Complex64; N]) -> DVector<Complex64> {
    DVector::from_row_slice(v)
}

fn rel_err(fast: &[Complex64], oracle: &DVector<Complex64>) -> f64 {
    let diff: f64 = fast.iter().zip(oracle.iter()).map(|(a, b)| (a - b).norm_sqr()).sum();
    diff.sqrt() / oracle.norm()
}

fn random_vec<const N: usize>(rng: &mut ChaCha8Rng) -> [Complex64; N] {
    std::array::from_fn(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

#[test]
fn fluid_symbol_exponential_at_unit_wavevector() {
    let p = ModelParams::default();
    let a = FluidSymbol::new([1.0, 0.0, 0.0], &p).unwrap().matrix;
    let v = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5), Complex64::default(), Complex64::default(), Complex64::new(0.3, 0.0)];
    let fast = matrix_exponential_apply(&a, 10.0, &v).unwrap();
    let oracle = expm_ode_oracle(&to_dmatrix(&a), 10.0, &dvec(&v)).unwrap();
    assert!(rel_err(&fast, &oracle) < 1e-8);
}

#[test]
fn generator_matches_block_assembly() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let p = ModelParams::new(0.7, 0.2, 1.3, 1.5, nsm_core::PressureModel::Polytropic { gamma: 1.4 }).unwrap();
    for _ in 0..20 {
        let xi = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
        let fast = full_generator(xi, &p);
        let oracle = generator_matrix(xi, &p);
        for i in 0..11 {
            for j in 0..11 {
                assert!((fast[(i, j)] - oracle[(i, j)]).norm() < 1e-14, "entry ({i},{j}) at {xi:?}");
            }
        }
    }
}

#[test]
fn full_generator_exponential_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let p = ModelParams::default();
    for _ in 0..25 {
        let xi = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let t = rng.random_range(0.0..20.0);
        let v: [Complex64; 11] = random_vec(&mut rng);
        let a = full_generator(xi, &p);
        let fast = matrix_exponential_apply(&a, t, &v).unwrap();
        let oracle = expm_ode_oracle(&generator_matrix(xi, &p), t, &dvec(&v)).unwrap();
        assert!(rel_err(&fast, &oracle) < 1e-8, "xi = {xi:?}, t = {t}");
    }
}

#[test]
fn eigenvalues_match_schur() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let a = CMat::<11>::from_fn(|_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let fast = eigenvalues(&a).unwrap();
        let oracle = dense_eigenvalues(&to_dmatrix(&a)).unwrap();
        let scale = a.frobenius();
        for z in fast {
            let d = oracle.iter().map(|w| (z - w).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-9 * scale);
        }
    }
}

fn low_mode_state(g: SpectralGrid) -> StateVector {
    let a = Complex64::new(1e-2, 0.0);
    let b = Complex64::new(0.0, 6e-3);
    let mode = |m: [i64; 3], z: Complex64| ScalarField::real_mode(g, m, z).unwrap();
    let n0 = mode([1, 0, 0], a);
    let mut u0 = VectorField::zeros(g);
    u0.c[0] = mode([0, 1, 0], b);
    u0.c[1] = mode([1, 0, 0], a);
    let s0 = mode([0, 0, 1], a);
    let mut e_perp = VectorField::zeros(g);
    e_perp.c[2] = mode([1, 1, 0], b);
    let mut pot = VectorField::zeros(g);
    pot.c[1] = mode([0, 0, 1], a);
    init_compatible(&n0, &u0, &s0, &e_perp, &pot).unwrap()
}

#[test]
fn spectral_rhs_against_finite_differences_converges_at_second_order() {
    let p = ModelParams::default();
    let errors: Vec<f64> = [16usize, 32]
        .iter()
        .map(|&n| {
            let g = SpectralGrid::new(2.0 * PI, n).unwrap();
            let u = low_mode_state(g);
            let mut d = rhs(&u, &p).unwrap();
            d.axpy(-1.0, &fd_rhs_oracle(&u, &p));
            d.l2_norm()
        })
        .collect();
    let order = (errors[0] / errors[1]).log2();
    assert!((order - 2.0).abs() < 0.2, "order {order}, errors {errors:?}");
}

#[test]
fn energy_functionals_dual_representation() {
    let g = SpectralGrid::new(2.0 * PI, 8).unwrap();
    let u = random_smooth_state(g, 0.1, 5).unwrap();
    for w in [EnergyWeights::default(), EnergyWeights::new(3, 0.1, 0.3).unwrap()] {
        let fast = EnergyEvaluator::new(g, w).evaluate(&u);
        let direct = energy_direct(&u, &w);
        let pairs = [
            (fast.energy, direct.energy),
            (fast.energy_high, direct.energy_high),
            (fast.dissipation, direct.dissipation),
            (fast.dissipation_high, direct.dissipation_high),
        ];
        for (a, b) in pairs {
            assert!(((a - b) / b).abs() < 1e-10, "{a} vs {b}");
        }
    }
}

#[test]
fn radial_quadrature_against_trapezoid_doubling() {
    let p = ModelParams::default();
    let data = Family::Compatible.data();
    let t = 30.0;
    let fast = whole_space_l2(&data, t, Component::Density, &p, &QuadratureOptions::default()).unwrap();
    let integrand = |r: f64| {
        if r == 0.0 {
            return 0.0;
        }
        let n0 = data.density.eval(r);
        let mut v = [Complex64::default(); 11];
        v[0] = Complex64::new(n0, 0.0);
        v[1] = Complex64::new(0.0, data.velocity_par.eval(r));
        v[4] = Complex64::new(data.temperature.eval(r), 0.0);
        v[5] = Complex64::new(0.0, n0 / r);
        let w = propagate_linear_mode([r, 0.0, 0.0], t, &v, &p).unwrap();
        4.0 * PI * r * r * w[0].norm_sqr()
    };
    let oracle = quadrature_refinement_oracle(integrand, data.cutoff_radius(1e-12), 1e-9)
        .unwrap()
        .sqrt();
    assert!(((fast - oracle) / oracle).abs() < 1e-7, "{fast} vs {oracle}");
}
