use thiserror::Error;

#[derive(Debug, Error)]
pub enum SobolevError {
    #[error(transparent)]
    Fem(#[from] sector_fem::FemError),
    #[error(transparent)]
    Mesh(#[from] sector_mesh::MeshError),
    #[error(transparent)]
    Geometry(#[from] sector_geometry::GeometryError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("test function has zero gradient norm")]
    ZeroGradient,
}

pub type Result<T> = std::result::Result<T, SobolevError>;
