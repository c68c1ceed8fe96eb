use thiserror::Error;

use crate::geometry::Point;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("degenerate segment: both endpoints at {at:?}")]
    DegenerateSegment { at: Box<Point> },
    #[error("invalid instance: segment {segment}: {reason}")]
    InvalidInstance { segment: usize, reason: String },
    #[error("infeasible: segment {segment} cannot be covered")]
    Infeasible { segment: usize },
    #[error("infeasible: point {index} at {at:?} cannot be covered")]
    UncoveredPoint { index: usize, at: Box<Point> },
    #[error("node budget of {budget} exhausted")]
    TooLarge { budget: u64 },
    #[error("{0}")]
    Structure(String),
}

impl SolveError {
    pub(crate) fn invalid(segment: usize, reason: impl Into<String>) -> Self {
        SolveError::InvalidInstance { segment, reason: reason.into() }
    }
}
