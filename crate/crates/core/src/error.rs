use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("incomplete fan: {0}")]
    IncompleteFan(String),
    #[error("degenerate fan: {0}")]
    DegenerateFan(String),
    #[error("unbalanced degree: {0}")]
    Unbalanced(String),
    #[error("not in X_Sigma: {0}")]
    NotInFan(String),
    #[error("disconnected graph")]
    Disconnected,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("genericity failure: {0}")]
    Genericity(String),
    #[error("non-generic Q: {0}")]
    NonGenericQ(String),
    #[error("non-transverse path: {0}")]
    NonTransverse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("infinite cokernel")]
    InfiniteCokernel,
    #[error("non-rigid curve: {0}")]
    NonRigid(String),
    #[error("property violation: {0}")]
    Property(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
