use thiserror::Error;

use crate::geometry::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {element} out of range for ground set of size {n}")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("ground set size {0} not supported (must be 1..=64)")]
    GroundSetSize(usize),

    #[error("ground set of size {n} exceeds the limit of {limit} for {what}")]
    TooLarge { n: usize, limit: usize, what: &'static str },

    #[error("family is not a convex geometry: {0}")]
    Axioms(ValidationReport),

    #[error("cannot delete the whole ground set")]
    DeleteAll,

    #[error("winning set must be nonempty")]
    EmptyWinningSet,

    #[error("position is terminal")]
    TerminalPosition,

    #[error("digraph contains a cycle through vertex {0}")]
    Cycle(usize),

    #[error("arrow target {0} is not a structure class")]
    DanglingArrow(usize),

    #[error("structure diagram has no types; run type calculus first")]
    TypesMissing,

    #[error("automorphism search exceeded its budget of {0} nodes")]
    SearchBudget(u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no closed form applies: {0}")]
    NoClosedForm(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("duplicate point at indices {0} and {1}")]
    DuplicatePoint(usize, usize),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid rational {0:?}")]
    Rational(String),

    #[error("unknown element label {0:?}")]
    UnknownLabel(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
