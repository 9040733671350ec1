use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Dense exact diagonalization past the configured size cap.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// The fermion-parity operator is only defined here for N = 0 (mod 4);
    /// other sizes carry a size-dependent phase that this crate does not model.
    #[error("unsupported system size: {0}")]
    UnsupportedSize(String),

    /// Ground state degenerate within its parity block; the zero-damping
    /// Green function is not well defined there.
    #[error("degenerate ground state: {0}")]
    Degenerate(String),

    /// Some |Z_k| fell below threshold, or the accumulated angle was not
    /// close to an integer multiple of 2*pi.
    #[error("ill-defined winding: {0}")]
    IllDefinedWinding(String),

    #[error("non-convergent: {0}")]
    NonConvergent(String),

    #[error("LAPACK {routine} failed with info={info}")]
    Lapack { routine: &'static str, info: i32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
