use thiserror::Error;

use crate::perm::{Element, Swap};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("permutation is empty")]
    Empty,
    #[error("duplicate element {0}")]
    Duplicate(Element),
    #[error("element labels must be positive integers, got 0")]
    ZeroLabel,
    #[error("invalid token '{0}'")]
    Parse(String),
    #[error("unknown element {0}")]
    UnknownElement(Element),
    #[error("elements of a pair must differ, got {0} twice")]
    SameElement(Element),
    #[error("position {position} is out of range for n = {n}")]
    PositionOutOfRange { position: usize, n: usize },
    #[error("swap {swap} is not applicable: {} is not directly before {}", swap.i, swap.j)]
    SwapNotApplicable { swap: Swap },
    #[error("invalid swap sequence at step {step}: swap {swap} is not applicable")]
    InvalidSequence { step: usize, swap: Swap },
    #[error("swap sequence starts from a different permutation")]
    SequenceMismatch,
    #[error("cannot restrict a permutation of a single element")]
    RestrictSingleton,
    #[error("element labels must be exactly 1..={n}")]
    NonContiguousLabels { n: usize },
    #[error("label sets do not match")]
    LabelMismatch,
    #[error("displacement vector is not feasible for this permutation")]
    Infeasible,
    #[error("displacement entries sum to {0}, expected 0")]
    NonZeroSum(i64),
    #[error("n = {n} exceeds the oracle cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("n = {n} is outside the supported range {min}..={max}")]
    SizeOutOfRange { n: usize, min: usize, max: usize },
    #[error("n = {0} must be even")]
    OddSize(usize),
}
