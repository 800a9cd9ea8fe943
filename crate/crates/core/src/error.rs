use thiserror::Error;

/// Errors raised across the crate.
///
/// The variants are grouped so that front ends can map them onto exit
/// statuses: parameter and precondition problems, numerical failures and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no shock: {0}")]
    NoShock(String),
    #[error("detached: {0}")]
    Detached(String),
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Serialization(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by the inputs rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::Precondition(_)
                | Error::NoShock(_)
                | Error::Detached(_)
                | Error::Geometry(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
