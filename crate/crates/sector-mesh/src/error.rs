use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("mesh size h = {0} outside (0, 0.2]")]
    InvalidSize(f64),
    #[error("grading = {0} must be at least 1")]
    InvalidGrading(f64),
    #[error("triangulation failed: {0}")]
    Triangulation(String),
    #[error("point ({x}, {y}) lies outside the mesh")]
    PointOutside { x: f64, y: f64 },
    #[error("minimum angle {0:.2} deg below the 20 deg bound")]
    Quality(f64),
    #[error("mesh invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, MeshError>;
