//! Physical parameters, pressure laws and the pointwise nonlinear sources.

use crate::error::{Error, Result};

/// A smooth pressure law `P(rho, theta)`.
pub trait PressureLaw {
    /// Returns `(P, P_rho, P_theta)` at `(rho, theta)`; both arguments are positive.
    fn evaluate(&self, rho: f64, theta: f64) -> (f64, f64, f64);
}

/// Built-in pressure laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PressureModel {
    /// `P = rho * theta`.
    IdealGas,
    /// `P = rho^gamma * theta`.
    Polytropic { gamma: f64 },
}

impl Default for PressureModel {
    fn default() -> Self {
        PressureModel::IdealGas
    }
}

impl PressureLaw for PressureModel {
    fn evaluate(&self, rho: f64, theta: f64) -> (f64, f64, f64) {
        match *self {
            PressureModel::IdealGas => (rho * theta, theta, rho),
            PressureModel::Polytropic { gamma } => {
                let rg = rho.powf(gamma);
                (rg * theta, gamma * rho.powf(gamma - 1.0) * theta, rg)
            }
        }
    }
}

/// Physical coefficients and the linearization constants derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub mu: f64,
    pub mu_prime: f64,
    pub kappa: f64,
    pub c_nu: f64,
    pub pressure: PressureModel,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub kappa_bar: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams::new(1.0, 0.0, 1.0, 1.5, PressureModel::IdealGas)
            .expect("default parameters are admissible")
    }
}

impl ModelParams {
    /// Validates the coefficients and derives `alpha1..3`, `kappa_bar` from the law at `(1, 1)`.
    pub fn new(
        mu: f64,
        mu_prime: f64,
        kappa: f64,
        c_nu: f64,
        pressure: PressureModel,
    ) -> Result<Self> {
        let finite = [mu, mu_prime, kappa, c_nu].iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("coefficients must be finite".into()));
        }
        if mu <= 0.0 {
            return Err(Error::InvalidParameter(format!("mu = {mu} must be positive")));
        }
        if mu + 2.0 / 3.0 * mu_prime <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "mu + 2/3 mu' = {} must be positive",
                mu + 2.0 / 3.0 * mu_prime
            )));
        }
        if kappa <= 0.0 || c_nu <= 0.0 {
            return Err(Error::InvalidParameter("kappa and c_nu must be positive".into()));
        }
        if let PressureModel::Polytropic { gamma } = pressure {
            if !(gamma.is_finite() && gamma > 0.0) {
                return Err(Error::InvalidParameter(format!("gamma = {gamma} must be positive")));
            }
        }
        let (_, p_rho, p_theta) = pressure.evaluate(1.0, 1.0);
        if p_rho <= 0.0 || p_theta <= 0.0 {
            return Err(Error::InvalidParameter(
                "pressure partials at (1, 1) must be positive".into(),
            ));
        }
        Ok(ModelParams {
            mu,
            mu_prime,
            kappa,
            c_nu,
            pressure,
            alpha1: p_rho,
            alpha2: p_theta,
            alpha3: p_theta / c_nu,
            kappa_bar: kappa / c_nu,
        })
    }

    /// Bulk coefficient `mu + mu'` multiplying `grad div u`.
    pub fn mu_bulk(&self) -> f64 {
        self.mu + self.mu_prime
    }
}

/// Pressure and its first partials at `(rho, theta)`.
pub fn pressure_partials(rho: f64, theta: f64, params: &ModelParams) -> Result<(f64, f64, f64)> {
    if !(rho > 0.0 && theta > 0.0) {
        return Err(Error::Domain(format!(
            "pressure requires rho > 0 and theta > 0, got ({rho}, {theta})"
        )));
    }
    Ok(params.pressure.evaluate(rho, theta))
}

/// Pointwise values and derivatives of a perturbation state.
///
/// `grad_u[i][j]` is `d_j u_i`; `grad_div_u[j]` is `d_j (div u)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PointState {
    pub n: f64,
    pub u: [f64; 3],
    pub sigma: f64,
    pub b: [f64; 3],
    pub grad_n: [f64; 3],
    pub grad_u: [[f64; 3]; 3],
    pub lap_u: [f64; 3],
    pub grad_div_u: [f64; 3],
    pub grad_sigma: [f64; 3],
    pub lap_sigma: f64,
    /// Gradient of `h4 = n u`, i.e. `grad_h4[i][j] = d_j (n u_i)`; only used for `h1`.
    pub grad_nu: [[f64; 3]; 3],
}

/// Source terms at one point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PointSources {
    pub h1: f64,
    pub h2: [f64; 3],
    pub h3: f64,
    pub h4: [f64; 3],
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Evaluates `h1..h4` at one point in their full (unsimplified) form.
///
/// `h1` is formed as `-div(n u)` from `grad_nu`, so it agrees with `-div h4` whenever the
/// caller supplies a consistent gradient of the product.
pub fn source_terms(s: &PointState, params: &ModelParams) -> Result<PointSources> {
    let rho = 1.0 + s.n;
    if !(rho > 0.0) {
        return Err(Error::SingularCoefficient { min_density: rho });
    }
    let theta = 1.0 + s.sigma;
    let (_, p_rho, p_theta) = params.pressure.evaluate(rho, theta);
    let inv = 1.0 / rho;
    let mu = params.mu;
    let mu_b = params.mu_bulk();
    let c_nu = params.c_nu;

    let div_u = s.grad_u[0][0] + s.grad_u[1][1] + s.grad_u[2][2];
    let uxb = cross(s.u, s.b);
    let coef_n = p_rho * inv - params.alpha1;
    let coef_s = p_theta * inv - params.alpha2;
    let coef_lap = mu * inv - mu;
    let coef_gd = mu_b * inv - mu_b;

    let mut h2 = [0.0; 3];
    for i in 0..3 {
        let adv: f64 = (0..3).map(|j| s.u[j] * s.grad_u[i][j]).sum();
        h2[i] = -adv - coef_n * s.grad_n[i] - coef_s * s.grad_sigma[i] - uxb[i]
            + coef_lap * s.lap_u[i]
            + coef_gd * s.grad_div_u[i];
    }

    let adv_sigma: f64 = (0..3).map(|j| s.u[j] * s.grad_sigma[j]).sum();
    // |grad u + grad u^T|^2
    let mut strain2 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let d = s.grad_u[i][j] + s.grad_u[j][i];
            strain2 += d * d;
        }
    }
    let h3 = -adv_sigma - (theta * p_theta * inv / c_nu - params.alpha3) * div_u
        + (params.kappa / (c_nu * rho) - params.kappa / c_nu) * s.lap_sigma
        + mu / (2.0 * c_nu * rho) * strain2
        + params.mu_prime / (c_nu * rho) * div_u * div_u;

    let h4 = [s.n * s.u[0], s.n * s.u[1], s.n * s.u[2]];
    let h1 = -(s.grad_nu[0][0] + s.grad_nu[1][1] + s.grad_nu[2][2]);
    Ok(PointSources { h1, h2, h3, h4 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_constants() {
        let p = ModelParams::default();
        assert_eq!((p.alpha1, p.alpha2), (1.0, 1.0));
        assert!((p.alpha3 - 2.0 / 3.0).abs() < 1e-15);
        assert!((p.kappa_bar - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ideal_gas_partials() {
        let p = ModelParams::default();
        assert_eq!(pressure_partials(2.0, 3.0, &p).unwrap(), (6.0, 3.0, 2.0));
        let (_, pr, pt) = pressure_partials(1.0, 1.0, &p).unwrap();
        assert_eq!((pr, pt), (p.alpha1, p.alpha2));
    }

    #[test]
    fn partials_match_central_differences() {
        for law in [PressureModel::IdealGas, PressureModel::Polytropic { gamma: 1.4 }] {
            let p = ModelParams::new(1.0, 0.0, 1.0, 1.5, law).unwrap();
            let (rho, theta, h) = (1.1, 0.9, 1e-5);
            let (_, pr, pt) = pressure_partials(rho, theta, &p).unwrap();
            let f = |r, t| pressure_partials(r, t, &p).unwrap().0;
            let fr = (f(rho + h, theta) - f(rho - h, theta)) / (2.0 * h);
            let ft = (f(rho, theta + h) - f(rho, theta - h)) / (2.0 * h);
            assert!(((fr - pr) / pr).abs() < 1e-8);
            assert!(((ft - pt) / pt).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_nonpositive_arguments() {
        let p = ModelParams::default();
        assert!(matches!(pressure_partials(0.0, 1.0, &p), Err(Error::Domain(_))));
        assert!(matches!(pressure_partials(1.0, -1.0, &p), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_bad_viscosity() {
        assert!(ModelParams::new(0.0, 0.0, 1.0, 1.5, PressureModel::IdealGas).is_err());
        assert!(ModelParams::new(1.0, -1.6, 1.0, 1.5, PressureModel::IdealGas).is_err());
        assert!(ModelParams::new(1.0, -1.4, 1.0, 1.5, PressureModel::IdealGas).is_ok());
    }

    #[test]
    fn zero_state_has_zero_sources() {
        let s = source_terms(&PointState::default(), &ModelParams::default()).unwrap();
        assert_eq!(s, PointSources::default());
    }

    #[test]
    fn constant_state_sources() {
        let st = PointState { n: 0.1, u: [1.0, 0.0, 0.0], ..Default::default() };
        let s = source_terms(&st, &ModelParams::default()).unwrap();
        assert_eq!(s.h4, [0.1, 0.0, 0.0]);
        assert_eq!(s.h1, 0.0);
        assert_eq!(s.h2, [0.0; 3]);
    }

    #[test]
    fn lorentz_term_is_orthogonal_to_velocity() {
        let st = PointState { u: [0.3, -0.2, 0.7], b: [1.1, 0.4, -0.5], ..Default::default() };
        let s = source_terms(&st, &ModelParams::default()).unwrap();
        let dot: f64 = (0..3).map(|i| s.h2[i] * st.u[i]).sum();
        assert!(dot.abs() < 1e-15);
    }

    #[test]
    fn singular_density_is_rejected() {
        let st = PointState { n: -1.0, ..Default::default() };
        assert!(matches!(
            source_terms(&st, &ModelParams::default()),
            Err(Error::SingularCoefficient { .. })
        ));
    }
}
