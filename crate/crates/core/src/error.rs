use thiserror::Error;

/// Errors produced by the library.
///
/// The variants are grouped so that callers (the CLI in particular) can map
/// them onto distinct exit codes: bad input, divergence and parse failures
/// are caller mistakes; `Unreachable` is a resource limit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("divergent: {0}")]
    Divergent(String),

    #[error("atom zeta(1) with sign +1 requires the zeta(1;1)=0 convention flag")]
    UnflaggedZetaOne,

    #[error("tolerance {tol:e} unreachable: {reason}")]
    Unreachable { tol: f64, reason: String },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
