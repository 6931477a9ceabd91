use thiserror::Error;

/// Errors shared across geometry, measure and solver operations.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("SingularMap: |det T| = {det:e} is below 1e-12")]
    SingularMap { det: f64 },
    #[error("UnboundedShape: directions do not positively span R^{dim}")]
    UnboundedShape { dim: usize },
    #[error("DegenerateShape: volume {volume:e} is below 1e-12")]
    DegenerateShape { volume: f64 },
    #[error("DimensionMismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("AsymmetricInput: {0}")]
    AsymmetricInput(String),
    #[error("InvalidP: p = {0} must be positive")]
    InvalidP(f64),
    #[error("NonpositiveSupport: h_L({u:?}) = {value:e}")]
    NonpositiveSupport { u: [f64; 3], value: f64 },
    #[error("SubspaceNotComplementary: {0}")]
    SubspaceNotComplementary(String),
    #[error("NoDescent: line search stalled after {iters} iterations")]
    NoDescent { iters: usize },
    #[error("InvalidInput: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
