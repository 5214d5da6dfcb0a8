use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("need at least {need} data points, found {found}")]
    TooFewPoints { need: usize, found: usize },
    #[error("bad corpus or family spec `{0}`")]
    BadSpec(String),
    #[error("fitted slope {slope:.4} exceeds the limit {limit}")]
    SlopeAboveLimit { slope: f64, limit: f64 },
    #[error("irrep set failed verification: {0}")]
    InvalidIrreps(String),
    #[error("{0} verification failure(s)")]
    VerificationFailed(usize),
    #[error(transparent)]
    Core(#[from] gdft::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
