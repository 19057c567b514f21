use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("fit: {0}")]
    Fit(#[from] crate::fit::FitError),
    #[error(transparent)]
    Core(#[from] nsm_core::Error),
    #[error("nonlinear run failed: {0}")]
    Run(#[from] Box<nsm_core::solver::RunError>),
    #[error("oracle: {0}")]
    Oracle(#[from] nsm_oracles::OracleError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
