//! Piecewise-linear finite elements for `Δu + f(u) = 0` on a sub-spherical sector with `u = 0`
//! on the arc and zero normal derivative on the rays: damped Newton, linear mixed solves,
//! the principal mixed eigenvalue, and field evaluation.

mod error;
mod field;
mod nonlinearity;
mod solve;
mod space;

pub use error::{FemError, Result};
pub use field::{FieldRecord, ScalarField};
pub use nonlinearity::NonlinearitySpec;
pub use solve::{
    principal_eigenvalue, solve_linear, solve_semilinear, Eigenpair, LinearProblem, SolveOptions, SolveReport,
    DEFAULT_MAX_NEWTON, DEFAULT_TOL, EIGEN_MAX_ITER, EIGEN_TOL,
};
pub use space::{Coefficient, FemSpace};
