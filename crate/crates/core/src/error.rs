use thiserror::Error;

/// Errors raised by the algebra, catalog, engine and planner layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),

    #[error("invalid chain complex: {0}")]
    InvalidChainComplex(String),

    /// A construction precondition fails; the payload names the violated inequality.
    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("script op {index}: {source}")]
    ScriptOp {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// True for errors that mean "the construction does not apply", as opposed to bad input.
    pub fn is_infeasible(&self) -> bool {
        match self {
            Error::Infeasible(_) | Error::OutOfScope(_) => true,
            Error::ScriptOp { source, .. } => source.is_infeasible(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
