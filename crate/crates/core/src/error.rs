use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vectors are not orthogonal (dot product {0:e})")]
    NonOrthogonal(f64),
    #[error("vector is not a unit direction (norm {0})")]
    NotUnit(f64),
    #[error("index ({0}, {1}) is out of range for the grid")]
    IndexOutOfRange(usize, usize),
    #[error("empty input")]
    EmptyInput,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("matrix is not orthogonal (deviation {0:e})")]
    NotOrthogonal(f64),
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("operation not supported for this body: {0}")]
    UnsupportedKind(String),
    #[error("origin is not an interior point of the body")]
    OriginOutside,
    #[error("width function is constant within tolerance; diameter set is not finite")]
    DegenerateBody,
    #[error("grid functions are defined on different grids")]
    GridMismatch,
    #[error("latitude nodes are not symmetric about zero")]
    AsymmetricRings,
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("diameter hypothesis failed: {0}")]
    DiameterHypothesisFailed(String),
    #[error("congruence hypothesis failed at w = {w:?} (residual {residual:e})")]
    CongruenceHypothesisFailed { w: [f64; 4], residual: f64 },
    #[error("translated body is not star-shaped with respect to the origin")]
    StarShapednessLost,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("projection is degenerate (affine rank {0})")]
    DegenerateProjection(usize),
    #[error("need at least 4 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("no asymmetric perturbation found after {0} iterations")]
    BudgetExhausted(usize),
}
