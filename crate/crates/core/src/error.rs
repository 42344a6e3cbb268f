use thiserror::Error;

use crate::index_set::IndexSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported maximum")]
    ModulusTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("row has length {found}, expected {expected}")]
    RowLength { expected: usize, found: usize },
    #[error("ambient mismatch: {left} vs {right}")]
    AmbientMismatch { left: String, right: String },
    #[error("index {index} out of range for a tuple of {len} subspaces")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("operation requires a nonempty index set")]
    EmptyIndexSet,
    #[error("ground set of {n} elements exceeds the subset-enumeration cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("subtuple {0} is linearly dependent")]
    Dependent(IndexSet),
    #[error("{0} is not a basis")]
    NotBasis(IndexSet),
    #[error("tuple is not BK: subtuple {subset} has defect {defect}")]
    NotBk { subset: IndexSet, defect: i64 },
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("order is not a linear extension of the poset")]
    InvalidExtension,
    #[error("operation requires a finite field")]
    NotFiniteField,
    #[error("{points} points exceed the enumeration cap {cap}")]
    PointCapExceeded { points: u128, cap: u64 },
    #[error("internal verification failed: {0}")]
    Verification(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
