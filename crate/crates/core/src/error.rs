use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("not in SL(n,C): {0}")]
    NotInSl(String),
    #[error("not on orbit: {0}")]
    NotOnOrbit(String),
    #[error("defective input: residual {0:e}")]
    Defective(f64),
    #[error("not a regular orbit point: eigenvalue gap {0:e}")]
    NotRegular(f64),
    #[error("not tangent: residual {0:e}")]
    NotTangent(f64),
    #[error("non-transversal pair, not in the orbit image")]
    NotTransversal,
    #[error("integration diverged: base drift {0:e}")]
    Diverged(f64),
    #[error("internal consistency: {0}")]
    Internal(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
