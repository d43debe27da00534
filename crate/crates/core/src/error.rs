use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by sequence construction, evaluation and the criteria.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("explicit point list contains the origin")]
    ZeroInList,

    #[error("point {value} would end up with negative multiplicity")]
    NegativeMultiplicity { value: Complex64 },

    #[error("argument {t} lies beyond the materialization radius {radius}")]
    BeyondRadius { t: f64, radius: f64 },

    #[error("evaluation at {z} requires radius at least {required}, sequence has {radius}")]
    OutsideTailRegion { z: Complex64, required: f64, radius: f64 },

    #[error("operation requires a real-mode sequence")]
    NotRealMode,

    #[error("operation requires a complex-mode sequence with a recorded M0")]
    NotComplexMode,

    #[error("even-form pairing requested on a sequence that is not closed under negation")]
    NotEven,

    #[error("projection is degenerate: point {value} has zero real part")]
    DegenerateProjection { value: Complex64 },

    #[error("need at least {needed} points, sequence has {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("density is unknown and cannot be estimated: {reason}")]
    DensityUnavailable { reason: String },

    #[error("{z} is within the exclusion radius of a zero")]
    AtZero { z: Complex64 },

    #[error("{z} is a pole candidate of the quotient (a point +-2^k)")]
    PoleCandidate { z: Complex64 },

    #[error("imaginary part of {z} must be positive")]
    NotUpperHalfPlane { z: Complex64 },

    #[error("tail cut {tail_cut} is too small: {reason}")]
    TailCutTooSmall { tail_cut: f64, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
