use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("directions are linearly dependent")]
    DependentDirections,

    #[error("affine map is singular")]
    SingularMap,

    #[error("interior point does not strictly satisfy constraint {0}")]
    InfeasibleInteriorPoint(usize),

    #[error("constraint system is unbounded")]
    Unbounded,

    #[error("body collapsed at t = {0}")]
    Collapsed(String),

    #[error("expected {expected} bodies, got {found}")]
    WrongCount { expected: usize, found: usize },

    #[error("{0} is not a facet normal of the body")]
    NotAFacetNormal(String),

    #[error("sphere function has no value for facet normal {0}")]
    MissingSphereValue(String),

    #[error("quadrature did not reach tolerance {tol:e} within {cap} evaluations")]
    QuadratureCap { tol: f64, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
