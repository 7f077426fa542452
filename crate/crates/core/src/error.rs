use thiserror::Error;

/// Errors raised by series construction, the special functions and the verifier.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by a series with no nonzero coefficient below its precision")]
    ZeroDivisor,
    #[error("requested precision {requested} exceeds the available precision {available}")]
    PrecisionLoss { requested: i64, available: i64 },
    #[error("sum does not converge as a formal series: {0}")]
    NonConvergent(String),
    #[error("parameters put a pole on the summation: {0}")]
    PolarParameters(String),
    #[error("non-integral exponent: {0}")]
    NonIntegerExponent(String),
    #[error("change of base needs a pair relative to q, got a = {0}")]
    WrongRelativeParameter(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unknown Bailey pair `{0}`")]
    UnknownPair(String),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("unknown series `{0}`")]
    UnknownSeries(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
