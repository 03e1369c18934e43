use thiserror::Error;

use crate::pde::GridState;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A coefficient family produced or was given a non-finite value.
    #[error("coefficient domain error in `{family}` family: parameter `{parameter}` = {value}")]
    CoefficientDomain {
        family: &'static str,
        parameter: String,
        value: f64,
    },

    /// The pair failed a requirement demanded by the caller.
    #[error("coefficient pair rejected: {0}")]
    InadmissiblePair(String),

    #[error("divergent integral: {0}")]
    DivergentIntegral(String),

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature did not converge: estimate {estimate:e} with error {error:e}")]
    Accuracy { estimate: f64, error: f64 },

    /// A hypothesis of the underlying theory is not met by the inputs.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("M1 = {m1} is too small: the admissible threshold is {threshold}")]
    M1TooSmall { m1: f64, threshold: f64 },

    #[error("initial datum rejected: {0}")]
    IncompatibleDatum(String),

    /// Non-finite values appeared; carries the last state that was finite.
    #[error("numerical blow-up at t = {t}")]
    BlowUp { t: f64, last_good: Box<GridState> },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("missing dependency: {0}")]
    Dependency(String),

    #[error("incompatible traces: {0}")]
    IncompatibleTraces(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
