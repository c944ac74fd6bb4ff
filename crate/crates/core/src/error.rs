//! Error type shared by every module of the crate.

use crate::rational::Rational;

/// Errors raised by group construction, set operations, searches, and surveys.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("group must have at least one factor")]
    EmptyFactorList,

    #[error("group factor must be >= 1")]
    ZeroFactor,

    #[error("group order overflows u64")]
    OrderOverflow,

    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: u64, order: u64 },

    #[error("operands belong to different groups")]
    GroupMismatch,

    #[error("group order {order} exceeds the operation cap {cap}")]
    OrderCapExceeded { order: u64, cap: u64 },

    #[error("fold count must be >= 1")]
    ZeroFold,

    #[error("require 1 <= k < l, got k={k}, l={l}")]
    InvalidPair { k: u32, l: u32 },

    #[error("order must be >= 1")]
    ZeroOrder,

    #[error("projection {reason}")]
    InvalidProjection { reason: String },

    #[error("subset is not over the projection's quotient group")]
    QuotientMismatch,

    #[error("interval witness for (k,l)=({k},{l}) needs {required} | n, got n={n}")]
    IndivisibleOrder {
        k: u32,
        l: u32,
        required: u64,
        n: u64,
    },

    #[error("shift set C must be nonempty")]
    EmptyShiftSet,

    #[error("formula/oracle mismatch at n={n}: formula {formula}, oracle {oracle}")]
    VerifyMismatch {
        n: u64,
        formula: Rational,
        oracle: Rational,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("worker pool: {0}")]
    WorkerPool(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
