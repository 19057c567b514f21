//! Experiment driver: configuration, linear and nonlinear studies, decay fits and reports.

pub mod bounds;
pub mod config;
pub mod criteria;
pub mod error;
pub mod fit;
pub mod linear;
pub mod nonlinear;
pub mod report;
pub mod run;

pub use config::{ExperimentConfig, Mode};
pub use error::{HarnessError, Result};
pub use fit::{fit_decay, FitModel, FitResult};
pub use report::Check;
pub use run::{execute, Outcome};
