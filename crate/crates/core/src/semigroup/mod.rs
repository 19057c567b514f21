//! The linearized system in Fourier variables.
//!
//! At each frequency the linearization splits into a fluid part `(n, u_par, sigma)` with
//! `E_par = i xi n / |xi|^2` slaved to the density, and an electromagnetic part
//! `(u_perp, E_perp, B)`. This module builds both symbols, the full 11-component generator,
//! their exponentials, and radial quadratures of whole-space `L^2` norms for isotropic data.

mod bounds;
mod propagate;
mod quadrature;
mod radial;
mod symbols;

pub use bounds::{
    bound_check_em, bound_check_fluid, search_em_constant, search_fluid_lambda,
    slowest_decay_rate, unweighted_m1_sup, BoundGrid, BoundReport, BoundRow, RateBlock, RateFit,
};
pub use propagate::{fluid_propagator, propagate_linear_mode, transverse_propagator};
pub use quadrature::{gauss_legendre, integrate_adaptive, QuadratureOptions};
pub use radial::{
    compatible_profile, period_averaged_l2, whole_space_l2, whole_space_l2_all, Component,
    Family, Polarization, RadialData, RadialProfile,
};
pub use symbols::{
    full_generator, longitudinal_reduced, transverse_reduced, EmSymbol, FluidSymbol,
};
