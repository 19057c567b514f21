//! Slow, independent reference computations for cross-checking `nsm-core`.
//!
//! Nothing here shares derivative formation, exponential or quadrature code with the fast
//! paths: physical values come from a direct separable DFT, derivatives from centered
//! differences or explicit multi-index products, exponentials from an embedded Runge-Kutta
//! pair, and integrals from trapezoid doubling.

pub mod dft;
pub mod eigen;
pub mod energy;
pub mod fd;
pub mod ode;
pub mod quadrature;
pub mod report;

pub use eigen::{dense_eigenvalues, to_dmatrix};
pub use energy::{energy_direct, DirectEnergy};
pub use fd::fd_rhs_oracle;
pub use ode::{expm_ode_oracle, generator_matrix, OdeOptions};
pub use quadrature::quadrature_refinement_oracle;
pub use report::{write_reports_csv, OracleReport};

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("step size underflow at t = {t} (h = {h:e}); the problem is too stiff for the explicit pair")]
    Stiffness { t: f64, h: f64 },
    #[error("no convergence after {points} points (last relative change {change:e})")]
    NoConvergence { points: usize, change: f64 },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, OracleError>;
