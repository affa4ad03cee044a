use thiserror::Error;

#[derive(Debug, Error)]
pub enum AuditError {
    #[error(transparent)]
    Fem(#[from] sector_fem::FemError),
    #[error(transparent)]
    Mesh(#[from] sector_mesh::MeshError),
    #[error(transparent)]
    Geometry(#[from] sector_geometry::GeometryError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("reflection ({x}, {y}) lies outside the sector")]
    ReflectionOutside { x: f64, y: f64 },
    #[error("{0} is empty")]
    Empty(&'static str),
    #[error("{0}")]
    OutOfRegime(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("malformed report: {0}")]
    Report(String),
}

pub type Result<T> = std::result::Result<T, AuditError>;
