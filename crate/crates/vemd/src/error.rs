//! Error type shared by the decomposition pipeline.

use std::fmt;

/// Errors raised by signal construction, envelope interpolation, the
/// back-projection solver, and the sifting loop.
#[derive(Debug, Clone, PartialEq)]
pub enum VemdError {
    /// Radical-inverse base is not a prime ≥ 2.
    InvalidBase(u64),
    /// Requested a direction set with zero directions.
    EmptyDirectionSet,
    /// Vector dimensions disagree (projection direction vs. channels, ...).
    ShapeMismatch { expected: usize, got: usize },
    /// A supplied projection direction is not unit length.
    NotUnitNorm { norm: f64 },
    /// Input is too short for the requested operation.
    TooShort { len: usize, min: usize },
    /// Fewer than two maxima or two minima available for an envelope.
    InsufficientExtrema { maxima: usize, minima: usize },
    /// Spline knot positions are not strictly increasing.
    InvalidKnots(String),
    /// No interior knot available to reflect across a boundary.
    BoundaryExtension(String),
    /// Anchor values do not project onto the target envelope.
    InconsistentConstraints { index: usize, violation: f64 },
    /// KKT factorization failed even after the regularization fallback.
    SingularSystem,
    /// No projection direction yields enough extrema for a local mean.
    NoExtrema,
    /// Metric is undefined (zero reference norm).
    UndefinedMetric,
    /// Signal construction violated an invariant.
    InvalidSignal(String),
    /// Configuration value out of range.
    InvalidConfig(String),
}

impl fmt::Display for VemdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VemdError::InvalidBase(b) => write!(f, "base {b} is not a prime >= 2"),
            VemdError::EmptyDirectionSet => write!(f, "direction set must contain at least one direction"),
            VemdError::ShapeMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            VemdError::NotUnitNorm { norm } => {
                write!(f, "projection direction has norm {norm}, expected 1")
            }
            VemdError::TooShort { len, min } => {
                write!(f, "input of length {len} is shorter than the required {min}")
            }
            VemdError::InsufficientExtrema { maxima, minima } => write!(
                f,
                "envelope needs at least 2 maxima and 2 minima, found {maxima} and {minima}"
            ),
            VemdError::InvalidKnots(msg) => write!(f, "invalid spline knots: {msg}"),
            VemdError::BoundaryExtension(msg) => write!(f, "boundary extension failed: {msg}"),
            VemdError::InconsistentConstraints { index, violation } => write!(
                f,
                "anchor {index} violates the envelope interpolation condition by {violation:e}"
            ),
            VemdError::SingularSystem => write!(f, "KKT system is numerically singular"),
            VemdError::NoExtrema => write!(f, "no projection direction has enough extrema"),
            VemdError::UndefinedMetric => write!(f, "metric undefined: reference has zero norm"),
            VemdError::InvalidSignal(msg) => write!(f, "invalid signal: {msg}"),
            VemdError::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl std::error::Error for VemdError {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, VemdError>;
