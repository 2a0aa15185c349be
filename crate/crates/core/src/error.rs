use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An operand left the mathematical domain of an operation. `op` names
    /// the pipeline stage so callers can report where the value went bad.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// Series terms stopped shrinking; the parameter set does not converge.
    #[error("series evaluation diverged after {terms} terms: term magnitude non-decreasing for {streak} consecutive terms")]
    Divergence { terms: usize, streak: usize },

    #[error("precision setup: {0}")]
    Precision(String),

    #[error("numeric parse: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}
