use thiserror::Error;

/// Errors raised by the geometry, variation and algebra layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("affine map is singular (det = 0)")]
    SingularMap,
    #[error("line coefficients a and b are both zero")]
    DegenerateLine,
    #[error("rotation pivot is not incident to the base line")]
    InvalidPerturbation,
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("point {0} is not in the domain")]
    PointNotInDomain(String),
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("point list is empty")]
    EmptyPointList,
    #[error("duplicate point {0}")]
    DuplicatePoint(String),
    #[error("non-finite function value at {0}")]
    NonFiniteValue(String),
    #[error("expected {expected} values, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("cycle is degenerate: all points coincide")]
    DegenerateCycle,
    #[error("points are not collinear")]
    NotCollinear,
    #[error("points are collinear")]
    CollinearPoints,
    #[error("expected exactly {expected} points, got {got}")]
    WrongPointCount { expected: usize, got: usize },
    #[error("points are not in strictly convex position")]
    NotConvexPosition,
    #[error("function domain does not match the projection of the point set")]
    ProjectionMismatch,
    #[error("the two sets do not join convexly")]
    NotJoinedConvexly,
    #[error("functions are defined on different domains")]
    DomainMismatch,
    #[error("function takes non-real values")]
    NonRealInput,
    #[error("circle sample is geometrically ambiguous at float precision")]
    AmbiguousGeometry,
    #[error("invalid circle sample: {0}")]
    InvalidCircleSample(String),
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
