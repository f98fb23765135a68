//! Error values for data-dependent failures.
//!
//! Structural misuse (mixing variable sets, mismatched moduli) panics;
//! failures that depend on the input data are reported as values so the
//! CLI can stay total.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SeriesError {
    /// Inversion of a series whose constant term is not a unit of the ring.
    NonUnitConstant,
    /// A substituted series or exp argument has a nonzero constant term.
    ConstantTermNotZero,
    /// A log argument whose constant term is not 1.
    ConstantTermNotOne,
    /// exp/log needed to divide by an integer that is not a unit
    /// (the ring is not rational).
    NonInvertibleInteger(i64),
    /// A valuation was requested of a series that vanishes identically
    /// to its truncation; the order of vanishing is undecidable.
    ValuationUndecidable,
    /// The requested computation needs more known coefficients.
    InsufficientTruncation { required: usize },
    /// A linear solve met an inconsistent coefficient.
    Inconsistent { q_degree: usize },
    /// A brute-force enumeration bound was exceeded.
    BoundExceeded { limit: usize },
    /// Mismatched divisor bookkeeping between two sections.
    DivisorMismatch,
    /// A parameter outside the supported range (odd weight, composite p, ...).
    InvalidArgument(String),
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::NonUnitConstant => {
                write!(f, "constant term is not a unit of the coefficient ring")
            }
            SeriesError::ConstantTermNotZero => write!(f, "constant term must be zero"),
            SeriesError::ConstantTermNotOne => write!(f, "constant term must be one"),
            SeriesError::NonInvertibleInteger(n) => {
                write!(f, "integer {} is not invertible in this ring", n)
            }
            SeriesError::ValuationUndecidable => write!(
                f,
                "series vanishes identically to its truncation; valuation undecidable"
            ),
            SeriesError::InsufficientTruncation { required } => {
                write!(f, "insufficient truncation: need at least {}", required)
            }
            SeriesError::Inconsistent { q_degree } => {
                write!(f, "inconsistent coefficient at q^{}", q_degree)
            }
            SeriesError::BoundExceeded { limit } => {
                write!(f, "brute-force bound exceeded (limit {})", limit)
            }
            SeriesError::DivisorMismatch => {
                write!(f, "divisor vectors of the two sides do not match")
            }
            SeriesError::InvalidArgument(msg) => write!(f, "{}", msg),
        }
    }
}

impl std::error::Error for SeriesError {}
