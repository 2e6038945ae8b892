use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Schema(String),
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("edge {edge:?} references unknown vertex {vertex:?}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("edge {0:?} has weight < 1")]
    BadWeight(String),
    #[error("vertex {0:?} has no incident edges")]
    Isolated(String),
    #[error("graph is disconnected: vertex {0:?} is unreachable from the first vertex")]
    Disconnected(String),
    #[error("edge {0:?} has a non-primitive direction")]
    NonPrimitive(String),
    #[error("edge {0:?} needs an explicit direction")]
    MissingDirection(String),
    #[error("edge {edge:?}: {detail}")]
    DirectionMismatch { edge: String, detail: String },
    #[error("vertex {vertex:?} is not balanced (residual {residual})")]
    Unbalanced { vertex: String, residual: String },
    #[error("ambient dimension {0} exceeds the limit {1}")]
    DimensionTooLarge(usize, usize),

    #[error("vertex {0:?} has valence > 3; use the higher-valent (xi) method")]
    NotTrivalent(String),
    #[error("edge {0:?} is contracted; the operation needs an immersive curve")]
    NotImmersive(String),
    #[error("contracted edges around vertex {0:?} contain a cycle (a loop is contracted)")]
    ContractedLoop(String),
    #[error("no configuration for higher-valent vertex {0:?}")]
    MissingConfiguration(String),
    #[error("vertex {vertex:?}: {detail}")]
    BadConfiguration { vertex: String, detail: String },
    #[error("Laurent data not strictly ordered: {0}")]
    Unordered(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("{0}")]
    Precondition(String),
}

impl Error {
    /// Input-validation errors (as opposed to failed computation preconditions).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Schema(_)
                | Error::DuplicateId(_)
                | Error::UnknownVertex { .. }
                | Error::BadWeight(_)
                | Error::Isolated(_)
                | Error::Disconnected(_)
                | Error::NonPrimitive(_)
                | Error::MissingDirection(_)
                | Error::DirectionMismatch { .. }
                | Error::Unbalanced { .. }
                | Error::DimensionTooLarge(..)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
