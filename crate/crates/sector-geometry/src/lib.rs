//! Closed-form geometry of planar sub-spherical sectors `Σ_{α,β}`.
//!
//! The sector is bounded by an arc of the unit circle centered at `O = (−a, 0)` and two
//! segments of length `l_N` meeting at the vertex `V = (0, 0)` with opening `β`. Moving lines
//! `T_{λ,ϑ}` pivot at `P_λ` on the lower segment; the crate provides their reflections, the
//! moving domains they cut out, the admissible angle sets and every derived critical constant.
//!
//! All quantities are pure functions of immutable values.

pub mod constants;
pub mod critical;
pub mod domain;
pub mod double;
pub mod error;
pub mod lines;
pub mod point;
pub mod roots;
pub mod spec;

pub use constants::{derive_constants, DerivedConstants};
pub use critical::{
    critical_angles, iota, jmath, l_star, lambda_c, lambda_check, lambda_hat, lambda_m, lambda_max, lambda_star,
    omega_bar, theta_a, theta_b, theta_lambda, zeta, AdmissibleSet, AngleInterval,
};
pub use domain::{moving_domain, BoundaryPiece, HValues, MovingDomain, PieceTag};
pub use double::{double_domain_contains, reflect_across_lower_neumann, DoubleMovingDomain, DoublePieceTag};
pub use error::{GeometryError, Result};
pub use lines::{reflect, sigma, MovingLine};
pub use point::Point;
pub use spec::{PointClass, SectorSpec};
