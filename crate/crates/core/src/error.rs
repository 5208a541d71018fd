use thiserror::Error;

use crate::model::Coord;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("model has no arcs")]
    Empty,
    #[error("circle length {0} is too small")]
    BadCircle(Coord),
    #[error("extreme {0} appears more than once")]
    DuplicateExtreme(Coord),
    #[error("arc ({}, {}) contains arc ({}, {})", outer.0, outer.1, inner.0, inner.1)]
    NotProper {
        outer: (Coord, Coord),
        inner: (Coord, Coord),
    },
    #[error("extreme {value} outside [0, {circle})")]
    OutOfRange { value: Coord, circle: Coord },
    #[error("external arc ({0}, {1}) in a PIG model")]
    ExternalArcInPig(Coord, Coord),
    #[error("k = {k} is not below omega = {omega}")]
    KTooLarge { k: usize, omega: usize },
    #[error("model is disconnected")]
    Disconnected,
    #[error("operation not defined for PIG models")]
    PigInput,
    #[error("multiple is not a valid model: {0}")]
    ExtremeCollision(String),
    #[error("arcs have unequal lengths")]
    NotUniform,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no edge {0} -> {1}")]
    NotAWalk(usize, usize),
    #[error("cycle weight {0} is not positive")]
    NotPositive(i128),
    #[error("no greedy {0} cycle with the required sign")]
    NotFound(&'static str),
    #[error("lex distances are not a fixpoint; the instance is not a yes-instance")]
    PreconditionViolated,
    #[error("reduced graph is not acyclic")]
    CycleInReduced,
    #[error("backbone of the synthetic graph has a cycle")]
    CyclicBackbone,
    #[error("model is not k-multiplicative")]
    NotMultiplicative,
    #[error("verification failed: {0}")]
    InternalVerificationFailed(String),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("gave up after {0} attempts")]
    GiveUp(u32),
    #[error("instance too large for exhaustive search (n = {0})")]
    TooLarge(usize),
}

impl Error {
    /// Errors that indicate a broken internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NotFound(_)
                | Error::CycleInReduced
                | Error::InternalVerificationFailed(_)
                | Error::Overflow
        )
    }
}
