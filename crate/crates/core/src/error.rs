use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("degree {0} is outside the supported range 1..={max}", max = crate::transform::MAX_DEGREE)]
    BadDegree(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("entry {position} has value {value}, expected a value in 1..={n}")]
    EntryOutOfRange {
        position: usize,
        value: usize,
        n: usize,
    },

    #[error("scan of {size} elements exceeds the configured bound {bound} (override with --max-scan)")]
    ScanBoundExceeded { size: u64, bound: u64 },

    #[error("{count} families exceed the materialization bound {bound}")]
    TooManyFamilies { count: String, bound: u64 },

    #[error("{idempotents} idempotents exceed the subset bound {bound} (override with --max-subsets or enable the pruned search)")]
    SubsetBoundExceeded { idempotents: usize, bound: usize },

    #[error("{0} is not an idempotent of the variant")]
    NotIdempotent(String),

    #[error("idempotent {eps} has rank {rank}, expected l-1 = {expected}")]
    WrongRank {
        eps: String,
        rank: usize,
        expected: usize,
    },

    #[error("operation needs a sandwich element of rank at least 2, got l = {0}")]
    RankTooSmall(usize),

    #[error("invalid family descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("the empty set is not a subsemigroup")]
    EmptySet,

    #[error("set is not closed under the sandwich product")]
    NotSubsemigroup,
}

pub type Result<T> = std::result::Result<T, Error>;
