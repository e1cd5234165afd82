//! Error type shared by every module.

use thiserror::Error;

/// Failures surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {0} is a pole of the gamma function")]
    GammaPole(f64),
    #[error("Newton refinement did not converge: {0}")]
    NonConvergence(String),
    #[error("quadrature tolerance not met (estimate {value}, error {error_estimate:e})")]
    Tolerance { value: f64, error_estimate: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("point is outside every declared growth sector")]
    OutOfSector,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("root finder stopped after {iterations} iterations with {unconverged} unconverged roots")]
    Unconverged { iterations: usize, unconverged: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("root bracketing failed at argument {0}")]
    Bracketing(f64),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("corner scaling limit destroyed: max Re b - Re a = {excess} >= lambda/2 = {half_lambda}")]
    Gated { excess: f64, half_lambda: f64 },
    #[error("corner-point prediction requested at xi = 1")]
    CornerPoint,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
