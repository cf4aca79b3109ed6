use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value lies on the light cone (squared norm {squared_norm:e})")]
    NullValue { squared_norm: f64 },
    #[error("node {node:?} is inside the finite-difference margin")]
    BoundaryPoint { node: Vec<usize> },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("frame is not Lagrangian (max |omega| = {max_omega:e})")]
    LagrangianViolation { max_omega: f64 },
    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),
    #[error("span is not J-invariant (residual {residual:e})")]
    NotJInvariant { residual: f64 },
    #[error("odd dimension {0} cannot carry a para-complex frame")]
    OddDimension(usize),
    #[error("field is not an almost para-complex structure: {0}")]
    NotParaComplexStructure(String),
    #[error("map is not para-holomorphic (max residual {residual:e})")]
    NotParaHolomorphic { residual: f64 },
    #[error("curve is not null (max |<c',c'>| = {max_norm:e})")]
    NotNullCurve { max_norm: f64 },
    #[error("null curves pair degenerately (min |<c1',c2'>| = {min_pairing:e})")]
    DegeneratePairing { min_pairing: f64 },
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("radius must be positive, got {0}")]
    NonpositiveRadius(f64),
    #[error("step size underflow at s = {s} (h = {h:e})")]
    StepFailure { s: f64, h: f64 },
    #[error("invalid case: {0}")]
    InvalidCase(String),
    #[error("integrand is singular: {0}")]
    IntegrandSingular(String),
}
