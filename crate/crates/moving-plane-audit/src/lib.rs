//! Audits of the moving-plane method on a computed solution field of a sub-spherical sector:
//! difference functions across moving lines, directional-derivative signs, Neumann tangential
//! signs, rotation functions and their leading exponent, symmetry and monotonicity, and
//! comparisons on the doubled sector. Results are tabulated as [`AuditReport`] rows.

mod audit;
mod calibrate;
mod checks;
mod double;
mod error;
mod report;
mod shape;
mod sweep;

pub use audit::{
    audit_tolerance, chord, chord_points, dist_to_polygon, interior_barycenters, ls_gradient, Audit, KAPPA,
    LINE_SAMPLES, LS_RADIUS, TOL_FLOOR,
};
pub use calibrate::{calibrate_kappa, radial_exact, radial_field, Calibration, CALIBRATION_SAFETY};
pub use checks::{
    chained_comparison, check_w_negative, default_hw_radii, difference_w, directional_sign, hw_exponent,
    hw_exponent_row, neumann_tangential, neumann_tangential_value, rotation_v, subcap_directional_sign, HwFit, Side,
    HW_ANGLES, HW_TOLERANCE,
};
pub use double::{check_double_negative, even_extension, ExtendedField};
pub use error::{AuditError, Result};
pub use report::{AuditReport, AuditRow, CheckId, EXPECTED_FAIL, EXPLORATORY, HEADER, VACUOUS};
pub use shape::{
    monotonicity_x1, monotonicity_x2_half, refinement_rate, symmetry_defect, symmetry_rate_row, symmetry_row,
    symmetry_samples, SymmetryDefect, SYMMETRY_LATTICE, SYMMETRY_MIN_RATE,
};
pub use sweep::{audit_pair, audit_sweep, is_asserted, theta_grid, ThetaPolicy, ASSERTED_BETA_MAX};
