use core::fmt;

use crate::scale::ElementId;

/// Everything that can go wrong while building scales, querying or sorting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScaleError {
    /// The scale description itself is malformed.
    InvalidSpec(&'static str),
    /// A rank array is not a permutation of `1..=n`.
    InvalidOrder,
    /// A query did not contain exactly `k` elements.
    WrongQuerySize { expected: usize, got: usize },
    /// The same element appears twice in a query.
    DuplicateId(ElementId),
    /// The element is outside the oracle's universe.
    UnknownId(ElementId),
    /// The universe is too small for the requested operation.
    TooFewElements { n: usize, needed: usize },
    /// Not enough eliminated elements to serve as references or donors.
    NotEnoughDonors { have: usize, need: usize },
    /// Not enough known-extreme elements to pad a query.
    PaddingExhausted,
    /// Observed outcomes contradict the assumptions of an algorithm step.
    Inconsistent(&'static str),
    /// The available answers do not pin down a unique result.
    Ambiguous(&'static str),
    /// A batch result is missing the answer to a planned query.
    MissingResult,
    /// The surviving adjacency graph is not a single path.
    NotAPath,
    /// The operation is undefined for symmetric scales.
    SymmetricSpec,
    /// The operation is not available for this scale shape.
    Unsupported(&'static str),
    /// A result does not partition the universe of the order it is compared to.
    PartitionMismatch,
}

impl fmt::Display for ScaleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleError::InvalidSpec(why) => write!(f, "invalid scale: {why}"),
            ScaleError::InvalidOrder => write!(f, "rank array is not a permutation of 1..=n"),
            ScaleError::WrongQuerySize { expected, got } => {
                write!(f, "query has {got} elements, scale takes {expected}")
            }
            ScaleError::DuplicateId(id) => write!(f, "element {id} appears twice in the query"),
            ScaleError::UnknownId(id) => write!(f, "element {id} is not in the universe"),
            ScaleError::TooFewElements { n, needed } => {
                write!(f, "{n} elements is too few, need at least {needed}")
            }
            ScaleError::NotEnoughDonors { have, need } => {
                write!(f, "need {need} eliminated elements, only {have} available")
            }
            ScaleError::PaddingExhausted => write!(f, "not enough known elements to pad a query"),
            ScaleError::Inconsistent(why) => write!(f, "inconsistent outcomes: {why}"),
            ScaleError::Ambiguous(why) => write!(f, "ambiguous: {why}"),
            ScaleError::MissingResult => write!(f, "no result recorded for a planned query"),
            ScaleError::NotAPath => write!(f, "adjacency graph is not a single path"),
            ScaleError::SymmetricSpec => write!(f, "operation undefined for a symmetric scale"),
            ScaleError::Unsupported(why) => write!(f, "unsupported: {why}"),
            ScaleError::PartitionMismatch => {
                write!(f, "result does not partition the element universe")
            }
        }
    }
}

impl core::error::Error for ScaleError {}
