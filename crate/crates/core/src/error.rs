use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("polytope is not full-dimensional")]
    Degenerate,

    #[error("origin is not an interior point of the polytope")]
    NotUnitBall,

    #[error("point set is not antipodally symmetric: {0} has no antipode")]
    Asymmetric(String),

    #[error("point set does not define a norm: {0}")]
    NotANorm(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not an isometry: {0}")]
    NotIsometric(String),

    #[error("selector {0} annihilates a dual extreme point")]
    Selector(String),

    #[error("index {index} out of range (size {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("wrong space type: {0}")]
    WrongType(String),

    #[error("linear program has no optimum ({0})")]
    NoOptimum(&'static str),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dims<'a, S: crate::scalar::Scalar>(
    expected: usize,
    vectors: impl IntoIterator<Item = &'a crate::ratgeom::Vector<S>>,
) -> Result<()> {
    for v in vectors {
        if v.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: v.dim(),
            });
        }
    }
    Ok(())
}
