use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (relative asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("direction is not a unit vector (norm {0})")]
    NotUnit(f64),

    #[error("directions are not orthogonal (dot product {0:e})")]
    NotOrthogonal(f64),

    #[error("mixture size must be at least 1")]
    InvalidCount,

    #[error("{0}")]
    ConfigInvalid(String),

    #[error("cannot merge tallies for different statistics: {0} vs {1}")]
    LabelMismatch(String, String),
}

impl Error {
    /// True for failures of state validation (as opposed to usage errors).
    pub fn is_invalid_state(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian(_)
                | Error::NotNormalized(_)
                | Error::InvalidTrace(_)
                | Error::NotPositive(_)
                | Error::NonFinite
        )
    }
}
