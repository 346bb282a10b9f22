//! Crate-wide error type.

use crate::pt::MAX_DEGREE;

/// Errors produced by parsing, enumeration, closure and verification.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u8, u8),

    #[error("degree {0} is outside the supported range [1, {MAX_DEGREE}]")]
    DegreeOutOfRange(usize),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("point {point} is outside the chain [1, {degree}]")]
    PointOutOfRange { point: u8, degree: u8 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("element budget {budget} exceeded{}", match predicted {
        Some(p) => format!(" (predicted cardinality {p})"),
        None => format!(" (reached {reached} elements)"),
    })]
    BudgetExceeded {
        budget: usize,
        /// Exact predicted cardinality, when a counting formula exists.
        predicted: Option<String>,
        /// Number of elements produced before giving up.
        reached: usize,
    },

    #[error("element set is not closed under composition: {left} * {right} = {product} is missing")]
    NotClosed {
        left: String,
        right: String,
        product: String,
    },

    #[error("element {0} is not a member of the semigroup")]
    NotMember(String),
}

pub type Result<T> = std::result::Result<T, Error>;
