use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("context error: {0}")]
    Context(String),
    #[error("order error: jet order {required} exceeds the context maximum {max}")]
    Order { required: usize, max: usize },
    #[error("substitution error: {0}")]
    Substitution(String),
    #[error("degree error: expected {expected}, found degree {found}")]
    Degree { expected: String, found: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("horizontality error: {0}")]
    Horizontality(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("ungrounded atom: {0}")]
    Ungrounded(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable short code, surfaced by the command line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Context(_) => "context",
            Error::Order { .. } => "order",
            Error::Substitution(_) => "substitution",
            Error::Degree { .. } => "degree",
            Error::Dimension(_) => "dimension",
            Error::Domain(_) => "domain",
            Error::Horizontality(_) => "horizontality",
            Error::Structure(_) => "structure",
            Error::Ungrounded(_) => "ungrounded",
            Error::Internal(_) => "internal",
        }
    }
}
