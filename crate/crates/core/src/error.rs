use thiserror::Error;

use crate::scalar::ScalarError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("malformed payload: {0}")]
    MalformedPayload(String),
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("functional takes the value {0} at the normalizing element; need a finite nonzero value")]
    NotNormalizable(String),
    #[error("the normalized family F_z is empty")]
    EmptyNormalizedFamily,
    #[error("element `{0}` is not compactly contained in inf*z")]
    NotCompactlyDominated(String),
    #[error("chain is not increasing at term {0}")]
    ChainNotIncreasing(usize),
    #[error("element `{0}` is not full")]
    NotFull(String),
    #[error("profile must have norm 1 (largest eigenvalue value is {0})")]
    NormalizationRequired(String),
    #[error("no closed form for model `{0}`; use the bounded search")]
    NoClosedForm(String),
    #[error("unknown property `{0}`")]
    UnknownPropertyName(String),
}

pub type Result<T> = std::result::Result<T, Error>;
