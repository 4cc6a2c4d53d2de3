use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombinatError {
    #[error("cannot compose: target [{left}] differs from source [{right}]")]
    NotComposable { left: i32, right: i32 },
    #[error("values not monotone: {0} > {1}")]
    NotMonotone(usize, usize),
    #[error("value {value} out of range for target [{tgt}]")]
    OutOfRange { value: usize, tgt: i32 },
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("the empty ordinal is only allowed in augmented mode")]
    AugmentedRejected,
    #[error("invalid ordinal {0}")]
    InvalidObject(i64),
    #[error("no map from a nonempty ordinal to the empty one")]
    NoMapToEmpty,
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("budget exceeded enumerating {what}: need {needed}, budget {budget}")]
    BudgetExceeded { what: &'static str, needed: u128, budget: u64 },
    #[error("Γ map must send 0 to 0")]
    NotPointed,
    #[error("sequence {0:?} is not a valid object here")]
    InvalidSequence(Vec<usize>),
    #[error("map is not injective")]
    NotInjective,
    #[error("map is not surjective")]
    NotSurjective,
    #[error("object not in truncated category: {0}")]
    UnknownObject(String),
    #[error("morphism not in truncated category: {0}")]
    UnknownMorphism(String),
    #[error("gluing data inconsistent: {0}")]
    BadGluingData(String),
    #[error("comma category is empty")]
    EmptyComma,
    #[error("the poset of admissible pairs is empty")]
    EmptyPoset,
    #[error("inconsistent input data: {0}")]
    Inconsistent(String),
    #[error("simplex is not in the ambient nerve: {0}")]
    NotASimplex(String),
}

pub type Result<T> = std::result::Result<T, CombinatError>;
