use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification of failures, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Resource,
    Numerical,
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid orbifold order {0}: orders must be at least 2")]
    InvalidOrder(i64),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("signature {0} is not hyperbolic")]
    NotHyperbolic(String),
    #[error("{what} exceeded its budget of {limit}")]
    ResourceExceeded { what: &'static str, limit: usize },
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("malformed residue: {0}")]
    MalformedResidue(String),
    #[error("incompatible representation: {0}")]
    IncompatibleRepresentation(String),
    #[error("integration path comes within {distance:.3e} of singular point {point} (exclusion radius {radius})")]
    Geometry { point: f64, distance: f64, radius: f64 },
    #[error("numerical accuracy not met: {0}")]
    NumericalAccuracy(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::ResourceExceeded { .. } => ErrorClass::Resource,
            Error::Geometry { .. } | Error::NumericalAccuracy(_) => ErrorClass::Numerical,
            _ => ErrorClass::Validation,
        }
    }
}
