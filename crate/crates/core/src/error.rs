use alloc::string::String;
use core::fmt;

/// Failures reported by the library. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    IndexOutOfRange { index: usize, rank: usize },
    PeriodOne { index: usize },
    /// A power tail was given for a generator of infinite period.
    TailOnInfinite { index: usize },
    /// A tail has an entry at or below the index it must lie strictly above.
    SupportViolation { relation: String, index: usize },
    InvalidCommutatorKey { j: usize, i: usize },
    LengthMismatch { expected: usize, found: usize },
    NotNormal,
    NotCentral,
    Inconsistent(String),
    RelationViolated { relation: String },
    InvalidParams(String),
    DomainMismatch,
    InfiniteRing,
    TooLarge(String),
    Degenerate(String),
    UnknownBlock(usize),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::IndexOutOfRange { index, rank } => {
                write!(f, "generator index {} out of range 1..{}", index + 1, rank)
            }
            Error::PeriodOne { index } => write!(f, "generator u{} has period 1", index + 1),
            Error::TailOnInfinite { index } => {
                write!(f, "power tail given for u{}, which has infinite period", index + 1)
            }
            Error::SupportViolation { relation, index } => {
                write!(f, "tail of {} has an entry at u{} outside its allowed support", relation, index + 1)
            }
            Error::InvalidCommutatorKey { j, i } => {
                write!(f, "commutator key {},{} must have the first index larger", j + 1, i + 1)
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "expected {} entries, found {}", expected, found)
            }
            Error::NotNormal => write!(f, "subgroup is not normal"),
            Error::NotCentral => write!(f, "series is not central"),
            Error::Inconsistent(s) => write!(f, "inconsistent presentation: {}", s),
            Error::RelationViolated { relation } => write!(f, "relation violated: {}", relation),
            Error::InvalidParams(s) => write!(f, "invalid parameters: {}", s),
            Error::DomainMismatch => write!(f, "domain and codomain do not match"),
            Error::InfiniteRing => write!(f, "ring is infinite"),
            Error::TooLarge(s) => write!(f, "too large: {}", s),
            Error::Degenerate(s) => write!(f, "degenerate bilinear map: {}", s),
            Error::UnknownBlock(b) => write!(f, "constraint refers to unknown block {}", b),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
