use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("unknown builtin manifold `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("density not defined by the product formula: nonvanishing {0}-fold cup products")]
    DensityUndefined(u32),

    #[error("guard limit exceeded: total weight {weight} > limit {limit}")]
    GuardLimit { weight: u32, limit: u32 },

    #[error("contract violation: differential does not square to zero at homdeg {0}")]
    NotAComplex(u32),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
