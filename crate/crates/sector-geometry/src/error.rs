use thiserror::Error;

/// Failures of geometric constructions and root finding.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid sector: {0}")]
    InvalidSpec(String),
    #[error("root not bracketed on [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}")]
    RootBracket { lo: f64, hi: f64, flo: f64, fhi: f64 },
    #[error("point coincides with the pivot P_λ")]
    CoincidentWithPivot,
    #[error("{what} undefined at θ = {theta} (removable singularity)")]
    DomainViolation { what: &'static str, theta: f64 },
    #[error("{what} = {value} outside admissible range ({lo}, {hi})")]
    OutOfRange { what: &'static str, value: f64, lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, GeometryError>;
