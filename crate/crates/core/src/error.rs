use thiserror::Error;

use crate::specio::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring spec mismatch: expected arity {expected}, found {found}")]
    SpecMismatch { expected: usize, found: usize },

    #[error("variable `{0}` has a negative exponent but its image is not a unit")]
    NonInvertibleImage(String),

    #[error("negative exponent at non-invertible variable `{0}`")]
    NegativeExponent(String),

    #[error("cannot certify automorphism: inverse images are missing")]
    CannotCertify,

    #[error("expected a {expected} map")]
    WrongMapKind { expected: &'static str },

    #[error("malformed presentation: {0}")]
    Structure(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("bad input: {0}")]
    BadInput(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("atom budget of {budget} exceeded")]
    BudgetExceeded { budget: usize },

    #[error(transparent)]
    Parse(#[from] ParseError),
}
