use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vectors must have at least one coordinate")]
    ZeroDimension,

    #[error("non-finite coordinate {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("empty set")]
    EmptySet,

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("problem dimension {dim} exceeds the supported envelope of {max}")]
    DimensionOverEnvelope { dim: usize, max: usize },

    #[error("NaN or infinite coefficient in linear constraint {row}")]
    NonFiniteCoefficient { row: usize },

    #[error("homogeneous row {row} must be of the form <coeffs, x> <= 0")]
    NotHomogeneous { row: usize },

    #[error("Fourier-Motzkin envelope exceeded: {0}")]
    EliminationEnvelope(String),

    #[error(
        "point lies in the interior of the convex hull; no supporting hyperplane passes through it"
    )]
    PInInterior,

    #[error("cone generators positively span the whole space; the cone is not proper")]
    ConeNotProper,

    #[error(
        "the perspective point belongs to one of the sets; its perspective cone is the whole space"
    )]
    DegeneratePoint,

    #[error("no hyperplane through the given point separates the two sets")]
    NotSeparableThroughP,

    #[error("operation is undefined for the trivial (whole-space) cone")]
    TrivialCone,

    #[error("cones do not share an apex")]
    ApexMismatch,

    #[error("at least one cone is required")]
    NoCones,

    #[error("internal consistency error: {0}")]
    Inconsistent(String),

    #[error("operation requires dimension {required}, got {found}")]
    UnsupportedDimension { required: usize, found: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("scene error: {0}")]
    Scene(String),
}

impl Error {
    /// Negative mathematical outcomes, as opposed to bad input.
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::PInInterior
                | Error::ConeNotProper
                | Error::DegeneratePoint
                | Error::NotSeparableThroughP
        )
    }
}
