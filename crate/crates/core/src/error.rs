use thiserror::Error;

/// Errors raised by the exact kernels and the decision pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("minimal polynomial is reducible over Q")]
    ReducibleMinpoly,
    #[error("minimal polynomial has no root in the given interval")]
    NoRootInInterval,
    #[error("minimal polynomial has several roots in the given interval")]
    MultipleRootsInInterval,
    #[error("minimal polynomial must be non-constant")]
    ConstantMinpoly,
    #[error("invalid root interval: lower end must be below upper end")]
    BadInterval,
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different number fields")]
    FieldMismatch,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("lattice basis is linearly dependent")]
    DependentInput,
    #[error("generator matrix does not have full column rank")]
    RankDeficient,
    #[error("coordinates violate the Plücker relations")]
    PluckerViolation,
    #[error("leading Grassmann coordinate G_{{1..d}} vanishes; permute coordinates first")]
    DegenerateLeadingCoordinate,
    #[error("volume is only implemented up to dimension 3 (got {0})")]
    DimensionTooHigh(usize),
    #[error("a lattice point projects onto the window boundary: {0}")]
    SingularOffset(String),
    #[error("point lies on a region boundary; perturb it")]
    SingularPoint,
    #[error("rendering requires d = 2 (got d = {0})")]
    UnsupportedDimension(usize),
    #[error("patch is empty")]
    EmptyPatch,
    #[error("path could not be folded inside the window")]
    NotFoldable,
    #[error("vector is not in the coincidence lattice")]
    InconsistentSystem,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
