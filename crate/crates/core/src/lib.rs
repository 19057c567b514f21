//! Numerical kernels for the non-isentropic compressible Navier-Stokes-Maxwell
//! system, written in perturbation variables `n = rho - 1`, `u`, `sigma = theta - 1`,
//! `E`, `B` about the constant equilibrium `(1, 0, 1, 0, 0)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] holds physical parameters, the pressure law and the pointwise
//!   nonlinear source terms.
//! * [`linalg`] provides fixed-size complex matrices, the matrix exponential and
//!   a small eigenvalue solver.
//! * [`spectral`] implements periodic Fourier fields and differential operators.
//! * [`state`] bundles the five unknowns into one spectral state vector.
//! * [`semigroup`] contains the Fourier symbols of the linearized system, the
//!   exact per-mode propagator and whole-space radial quadrature.
//! * [`solver`] advances the nonlinear system with Strang splitting.
//! * [`energy`] evaluates the energy and dissipation functionals.

pub mod energy;
pub mod error;
pub mod linalg;
pub mod model;
pub mod semigroup;
pub mod solver;
pub mod spectral;
pub mod state;

pub use error::{Error, Result};
pub use model::{ModelParams, PressureLaw, PressureModel};
pub use state::StateVector;
pub use num_complex::Complex64;
