use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge set is not the Dynkin diagram {0}")]
    WrongShape(String),
    #[error("edge {0}-{1} is oriented more than once")]
    Reorientation(usize, usize),
    #[error("value {value} at vertex {vertex} has the wrong parity")]
    ParityViolation { vertex: usize, value: i32 },
    #[error("vertex {0} is not a vertex of the quiver")]
    UnknownVertex(usize),
    #[error("root has empty support")]
    EmptySupport,
    #[error("vertex {0} is not in the support")]
    NotInSupport(usize),
    #[error("root vector has length {found}, expected {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("{0} is not contained in the multiset")]
    NotContained(String),
    #[error("object is not dominant")]
    NotDominant,
    #[error("size {size} exceeds the configured bound {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("shift would create a negative degree")]
    NegativeDegree,
    #[error("inconsistent connector: {0}")]
    InconsistentConnector(String),
    #[error("division is not exact")]
    InexactDivision,
    #[error("{0} is not a positive or negative simple root")]
    UnknownRoot(String),
    #[error("extremal monomial is not unique")]
    Incomparable,
    #[error("presentation mismatch: {0}")]
    PresentationMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
