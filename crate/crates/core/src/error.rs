use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("t = {t} is outside the warping interval ({lo}, {hi})")]
    Domain { t: f64, lo: f64, hi: f64 },
    #[error("warping function is not positive at t = {t} (f = {value})")]
    NonPositiveWarping { t: f64, value: f64 },
    #[error("vectors are attached to different base points")]
    BaseMismatch,
    #[error("plane is degenerate (area^2 = {0:e})")]
    DegeneratePlane(f64),
    #[error("immersion is not regular at (u, v) = ({u}, {v})")]
    DegenerateImmersion { u: f64, v: f64 },
    #[error("immersion is not regular at (u, v) = ({u}, {v}): {reason}")]
    Regularity { u: f64, v: f64, reason: String },
    #[error("tangential part of d/dt vanishes (theta ~ 0)")]
    AngleDegenerate,
    #[error("(u, v) = ({u}, {v}) is too close to the parameter domain boundary for the stencil")]
    BoundaryMargin { u: f64, v: f64 },
    #[error("(u, v) = ({u}, {v}) is outside the parameter domain")]
    OutsideParameterDomain { u: f64, v: f64 },
    #[error("adaptive quadrature did not converge on [{a}, {b}] (error estimate {estimate:e})")]
    NonConvergence { a: f64, b: f64, estimate: f64 },
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("grid {nu}x{nv} is too small (need at least {min}x{min})")]
    GridTooSmall { nu: usize, nv: usize, min: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;
