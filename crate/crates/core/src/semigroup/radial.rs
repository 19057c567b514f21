use std::f64::consts::PI;

use num_complex::Complex64;

use super::propagate::{longitudinal_propagator, transverse_propagator};
use super::quadrature::{gauss_legendre, integrate_adaptive, QuadratureOptions};
use crate::error::{Error, Result};
use crate::model::ModelParams;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// How a radial profile populates a frequency-space field at `xi = r w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    /// A scalar field `f(r)`.
    LongitudinalScalar,
    /// The vector field `i w f(r)`, the transform of a gradient of a radial function.
    LongitudinalGradient,
    /// `e(w) f(r)` for a unit vector `e(w)` orthogonal to `w`, one polarization plane.
    Transverse,
}

/// `amplitude * r^power * exp(-r^2 / 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub name: String,
    pub power: u32,
    pub amplitude: f64,
    pub polarization: Polarization,
}

impl RadialProfile {
    pub fn gaussian(name: &str, polarization: Polarization) -> Self {
        RadialProfile { name: name.into(), power: 0, amplitude: 1.0, polarization }
    }

    pub fn zero(name: &str, polarization: Polarization) -> Self {
        RadialProfile { name: name.into(), power: 0, amplitude: 0.0, polarization }
    }

    pub fn eval(&self, r: f64) -> f64 {
        if self.amplitude == 0.0 {
            return 0.0;
        }
        self.amplitude * r.powi(self.power as i32) * (-0.5 * r * r).exp()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitude == 0.0
    }

    /// `4 pi int_0^inf r^2 f(r)^2 dr` in closed form.
    pub fn l2_norm_squared(&self) -> f64 {
        // int r^{2p+2} e^{-r^2} dr = Gamma(p + 3/2) / 2
        let p = self.power as usize;
        let mut gamma = PI.sqrt() / 2.0; // Gamma(3/2)
        for k in 0..p {
            gamma *= k as f64 + 1.5;
        }
        4.0 * PI * self.amplitude * self.amplitude * gamma / 2.0
    }
}

/// The density/field pair `(n0, E0) = (r h, i w h)` satisfying `i xi . E0 = -n0`.
pub fn compatible_profile(h: &RadialProfile) -> (RadialProfile, RadialProfile) {
    let n0 = RadialProfile {
        name: format!("r*{}", h.name),
        power: h.power + 1,
        amplitude: h.amplitude,
        polarization: Polarization::LongitudinalScalar,
    };
    let e0 = RadialProfile {
        name: h.name.clone(),
        power: h.power,
        amplitude: h.amplitude,
        polarization: Polarization::LongitudinalGradient,
    };
    (n0, e0)
}

/// Named initial-data families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `n0 = r h`, `u0_par = i w h`, `sigma0 = h`, electromagnetic part zero.
    Compatible,
    /// As `Compatible` but with `n0 = h`, so `n0(0) != 0`.
    Generic,
    /// `u0_perp = E0_perp = B0 = h` in one polarization, fluid part zero.
    Transverse,
    /// `u0_perp = E0_perp = h`, `B0 = 0`.
    TransverseNoMagnetic,
    /// `Compatible` plus `Transverse`.
    Full,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Compatible,
        Family::Generic,
        Family::Transverse,
        Family::TransverseNoMagnetic,
        Family::Full,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Compatible => "compatible",
            Family::Generic => "generic",
            Family::Transverse => "transverse",
            Family::TransverseNoMagnetic => "transverse-no-b",
            Family::Full => "full",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn data(&self) -> RadialData {
        use Polarization::*;
        let h = RadialProfile::gaussian("gauss", LongitudinalScalar);
        let (n_compat, _) = compatible_profile(&h);
        let mut d = RadialData::zero();
        let fluid = |d: &mut RadialData, n0: RadialProfile| {
            d.density = n0;
            d.velocity_par = RadialProfile::gaussian("gauss", LongitudinalGradient);
            d.temperature = RadialProfile::gaussian("gauss", LongitudinalScalar);
        };
        let em = |d: &mut RadialData, with_b: bool| {
            d.velocity_perp = RadialProfile::gaussian("gauss", Transverse);
            d.electric_perp = RadialProfile::gaussian("gauss", Transverse);
            if with_b {
                d.magnetic = RadialProfile::gaussian("gauss", Transverse);
            }
        };
        match self {
            Family::Compatible => fluid(&mut d, n_compat),
            Family::Generic => fluid(&mut d, h),
            Family::Transverse => em(&mut d, true),
            Family::TransverseNoMagnetic => em(&mut d, false),
            Family::Full => {
                fluid(&mut d, n_compat);
                em(&mut d, true);
            }
        }
        d
    }
}

/// Isotropic initial data. `E0_par` is not stored: it is `i w n0 / r` by compatibility.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialData {
    pub density: RadialProfile,
    pub velocity_par: RadialProfile,
    pub temperature: RadialProfile,
    pub velocity_perp: RadialProfile,
    pub electric_perp: RadialProfile,
    pub magnetic: RadialProfile,
}

impl RadialData {
    pub fn zero() -> Self {
        use Polarization::*;
        RadialData {
            density: RadialProfile::zero("zero", LongitudinalScalar),
            velocity_par: RadialProfile::zero("zero", LongitudinalGradient),
            temperature: RadialProfile::zero("zero", LongitudinalScalar),
            velocity_perp: RadialProfile::zero("zero", Transverse),
            electric_perp: RadialProfile::zero("zero", Transverse),
            magnetic: RadialProfile::zero("zero", Transverse),
        }
    }

    fn profiles(&self) -> [&RadialProfile; 6] {
        [
            &self.density,
            &self.velocity_par,
            &self.temperature,
            &self.velocity_perp,
            &self.electric_perp,
            &self.magnetic,
        ]
    }

    fn check(&self) -> Result<()> {
        use Polarization::*;
        let want = [
            LongitudinalScalar,
            LongitudinalGradient,
            LongitudinalScalar,
            Transverse,
            Transverse,
            Transverse,
        ];
        for (p, w) in self.profiles().iter().zip(want) {
            if p.polarization != w {
                return Err(Error::InvalidParameter(format!(
                    "profile '{}' has polarization {:?}, expected {w:?}",
                    p.name, p.polarization
                )));
            }
            if !p.amplitude.is_finite() {
                return Err(Error::InvalidParameter("non-finite profile amplitude".into()));
            }
        }
        Ok(())
    }

    /// Smallest radius (on a 1/4 grid) beyond which every profile's `r^2 |f|^2` tail is below
    /// `tol` of its total.
    pub fn cutoff_radius(&self, tol: f64) -> f64 {
        let (x, w) = gauss_legendre(32);
        let tail = |p: u32, r0: f64| {
            // int_{r0}^{r0 + 12} r^{2p+2} e^{-r^2} dr
            let h = 6.0;
            x.iter()
                .zip(&w)
                .map(|(x, w)| {
                    let r = r0 + h * (1.0 + x);
                    h * w * r.powi(2 * p as i32 + 2) * (-r * r).exp()
                })
                .sum::<f64>()
        };
        let mut radius: f64 = 1.0;
        for prof in self.profiles() {
            if prof.is_zero() {
                continue;
            }
            let p = prof.power;
            let total = tail(p, 0.0);
            let mut r = 0.25;
            while tail(p, r) > tol * total {
                r += 0.25;
            }
            radius = radius.max(r);
        }
        radius
    }

    /// Initial longitudinal `(n, v, sigma)` and transverse `(u, E, B)` values at radius `r`.
    fn initial(&self, r: f64) -> ([Complex64; 3], [Complex64; 3]) {
        let re = |p: &RadialProfile| Complex64::new(p.eval(r), 0.0);
        (
            [re(&self.density), I * self.velocity_par.eval(r), re(&self.temperature)],
            [re(&self.velocity_perp), re(&self.electric_perp), re(&self.magnetic)],
        )
    }
}

/// Quantities whose whole-space `L^2` norms can be evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Density,
    VelocityPar,
    Temperature,
    ElectricPar,
    VelocityPerp,
    ElectricPerp,
    Magnetic,
    Velocity,
    Electric,
    /// The part of `u_par` driven by the initial density through the `M1` block.
    M1Density,
}

impl Component {
    pub const ALL: [Component; 10] = [
        Component::Density,
        Component::VelocityPar,
        Component::Temperature,
        Component::ElectricPar,
        Component::VelocityPerp,
        Component::ElectricPerp,
        Component::Magnetic,
        Component::Velocity,
        Component::Electric,
        Component::M1Density,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Component::Density => "n",
            Component::VelocityPar => "u_par",
            Component::Temperature => "sigma",
            Component::ElectricPar => "E_par",
            Component::VelocityPerp => "u_perp",
            Component::ElectricPerp => "E_perp",
            Component::Magnetic => "B",
            Component::Velocity => "u",
            Component::Electric => "E",
            Component::M1Density => "M1_n0",
        }
    }

    pub fn parse(s: &str) -> Option<Component> {
        Component::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Position in [`Component::ALL`] and in the arrays returned by [`whole_space_l2_all`].
    pub fn index(&self) -> usize {
        Component::ALL.iter().position(|c| c == self).unwrap()
    }
}

const NCOMP: usize = Component::ALL.len();

/// Squared magnitudes of every component at radius `r` and time `t`.
fn pointwise(
    data: &RadialData,
    r: f64,
    t: f64,
    p: &ModelParams,
    fluid: bool,
    em: bool,
    out: &mut [f64],
) -> Result<()> {
    let (l0, t0) = data.initial(r);
    let mut vals = [0.0; NCOMP];
    if fluid {
        let prop = longitudinal_propagator(r, t, p)?;
        let l = prop.matvec(&l0);
        let (n, v, s) = (l[0].norm_sqr(), l[1].norm_sqr(), l[2].norm_sqr());
        vals[Component::Density.index()] = n;
        vals[Component::VelocityPar.index()] = v;
        vals[Component::Temperature.index()] = s;
        vals[Component::ElectricPar.index()] = n / (r * r);
        vals[Component::M1Density.index()] = (prop[(1, 0)] * l0[0]).norm_sqr();
    }
    if em {
        let m = transverse_propagator(r, t, p)?.matvec(&t0);
        vals[Component::VelocityPerp.index()] = m[0].norm_sqr();
        vals[Component::ElectricPerp.index()] = m[1].norm_sqr();
        vals[Component::Magnetic.index()] = m[2].norm_sqr();
    }
    vals[Component::Velocity.index()] =
        vals[Component::VelocityPar.index()] + vals[Component::VelocityPerp.index()];
    vals[Component::Electric.index()] =
        vals[Component::ElectricPar.index()] + vals[Component::ElectricPerp.index()];
    let w = 4.0 * PI * r * r;
    for (o, v) in out.iter_mut().zip(vals) {
        *o += w * v;
    }
    Ok(())
}

fn integrate_components(
    data: &RadialData,
    params: &ModelParams,
    opts: &QuadratureOptions,
    times: &[(f64, f64)],
) -> Result<[f64; NCOMP]> {
    data.check()?;
    let fluid = [&data.density, &data.velocity_par, &data.temperature]
        .iter()
        .any(|p| !p.is_zero());
    let em = [&data.velocity_perp, &data.electric_perp, &data.magnetic]
        .iter()
        .any(|p| !p.is_zero());
    if !fluid && !em {
        return Ok([0.0; NCOMP]);
    }
    let radius = data.cutoff_radius(1e-12);
    let mut failure = None;
    let integral = integrate_adaptive(
        |r, out| {
            out.iter_mut().for_each(|o| *o = 0.0);
            let mut acc = [0.0; NCOMP];
            for &(t, weight) in times {
                let mut one = [0.0; NCOMP];
                if let Err(e) = pointwise(data, r, t, params, fluid, em, &mut one) {
                    failure.get_or_insert(e);
                }
                for (a, o) in acc.iter_mut().zip(one) {
                    *a += weight * o;
                }
            }
            out.copy_from_slice(&acc);
        },
        NCOMP,
        0.0,
        radius,
        opts,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let v = integral?;
    Ok(std::array::from_fn(|i| v[i]))
}

/// `L^2(R^3)` norms of all components at time `t`, indexed like [`Component::ALL`].
pub fn whole_space_l2_all(
    data: &RadialData,
    t: f64,
    params: &ModelParams,
    opts: &QuadratureOptions,
) -> Result<[f64; NCOMP]> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time must be finite and >= 0, got {t}")));
    }
    Ok(integrate_components(data, params, opts, &[(t, 1.0)])?.map(f64::sqrt))
}

/// `L^2(R^3)` norm of one component at time `t`.
pub fn whole_space_l2(
    data: &RadialData,
    t: f64,
    component: Component,
    params: &ModelParams,
    opts: &QuadratureOptions,
) -> Result<f64> {
    Ok(whole_space_l2_all(data, t, params, opts)?[component.index()])
}

/// Root-mean-square over `[t - window/2, t + window/2]` of every component's `L^2` norm,
/// with an `nodes`-point Gauss-Legendre rule in time. Used to remove the unit-frequency
/// plasma oscillation before fitting decay exponents.
pub fn period_averaged_l2(
    data: &RadialData,
    t: f64,
    window: f64,
    nodes: usize,
    params: &ModelParams,
    opts: &QuadratureOptions,
) -> Result<[f64; NCOMP]> {
    if !(window > 0.0 && t - 0.5 * window >= 0.0) {
        return Err(Error::Domain(format!(
            "averaging window {window} around t = {t} leaves [0, inf)"
        )));
    }
    let (x, w) = gauss_legendre(nodes);
    let times: Vec<(f64, f64)> = x.iter().zip(&w).map(|(x, w)| (t + 0.5 * window * x, 0.5 * w)).collect();
    Ok(integrate_components(data, params, opts, &times)?.map(f64::sqrt))
}
