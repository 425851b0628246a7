use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("fractional order {0} outside (0, 1)")]
    InvalidOrder(f64),

    #[error("gamma function undefined at x = {0}")]
    GammaDomain(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid coefficient `{field}`: {reason}")]
    Coefficients { field: String, reason: String },

    #[error("linear solver failed: {0}")]
    Solver(String),

    #[error("config `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
