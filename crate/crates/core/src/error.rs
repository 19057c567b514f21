use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular coefficient: min(n + 1) = {min_density:e} is below the admissible floor")]
    SingularCoefficient { min_density: f64 },
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("accuracy target missed: achieved relative error {achieved:e}, requested {requested:e}")]
    Accuracy { achieved: f64, requested: f64 },
    #[error("blow-up detected at t = {time}")]
    BlowUp { time: f64 },
    #[error("weights too large: no admissible c_trial below {c_low:e}")]
    WeightsTooLarge { c_low: f64 },
    #[error("malformed snapshot: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
