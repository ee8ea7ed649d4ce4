use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    /// The monomial matrix or rational map is not dominant.
    #[error("map is not dominant: {0}")]
    Dominance(String),

    #[error("map is not holomorphic on the given models: {0}")]
    NotHolomorphic(String),

    /// A resource cap was hit. `partial` carries whatever sequence values were
    /// completed before the cap.
    #[error("capacity exceeded: {what} (completed {} terms)", partial.len())]
    Capacity { what: String, partial: Vec<u64> },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("heuristic failed: {0}")]
    HeuristicFailure(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for errors caused by bad user input rather than by resource limits
    /// or internal failures.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::AmbientMismatch(_)
                | Error::InvalidModel(_)
                | Error::Configuration(_)
                | Error::InvalidFan(_)
                | Error::IndexOutOfRange { .. }
                | Error::Dominance(_)
                | Error::NotHolomorphic(_)
                | Error::Degenerate(_)
                | Error::Precondition(_)
                | Error::InsufficientData(_)
                | Error::Parse(_)
        )
    }
}
