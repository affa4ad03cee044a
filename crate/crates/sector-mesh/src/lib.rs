//! Conforming triangulations of `Σ_{α,β}` with tagged boundary edges, corner grading near the
//! vertex and the mixed points, arc nodes on the unit circle, and an optional mirror-symmetric
//! mode.

mod error;
mod generate;
mod locate;
mod mesh;

pub use error::{MeshError, Result};
pub use generate::{generate, MeshOptions, DEFAULT_GRADING, MIN_ANGLE_DEG};
pub use locate::Location;
pub use mesh::{BoundaryEdge, BoundaryTag, Mesh, MeshQuality};
