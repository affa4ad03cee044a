use sector_mesh::MeshError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FemError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("Newton diverged after {iterations} steps (residual {residual:e})")]
    Divergence { iterations: usize, residual: f64 },
    #[error("iteration did not converge within {0} steps")]
    NoConvergence(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid nonlinearity `{0}`")]
    ParseNonlinearity(String),
}

pub type Result<T> = std::result::Result<T, FemError>;
