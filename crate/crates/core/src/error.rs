use thiserror::Error;

/// Errors for matrix kernels, model construction and correlation measures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not Hermitian (max entrywise deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("spectral function undefined at eigenvalue {eigenvalue:.17e}")]
    Domain { eigenvalue: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositive { eigenvalue: f64 },

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
