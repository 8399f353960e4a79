use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A model or construction parameter violates its admissibility condition.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The result is not representable as a finite `f64`.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A grid scan could not establish a sign or bound it was asked to certify.
    #[error("certification failed: {0}")]
    Certification(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("fit failure: {0}")]
    Fit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
