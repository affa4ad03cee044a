//! Maximum-principle instrumentation on sectors: Bessel `J₀` and its first zero, the sine and
//! Bessel barriers of the narrow-band principles, small-volume checks on vertex slices, and
//! Sobolev-ratio lower bounds over a parametric bump family.

mod barrier;
mod bessel;
mod error;
mod small_volume;
mod sobolev;
mod table;

pub use barrier::{
    bessel_barrier, bessel_barrier_fd_laplacian, check_barrier_narrow, check_barrier_sector, fd_laplacian,
    narrow_band_threshold, sector_band_threshold, BarrierCheck, FD_STEP,
};
pub use bessel::{bessel_j0, bessel_j0_first_zero, j0_trapezoid, ASYMPTOTIC_LIMIT, SERIES_LIMIT};
pub use error::{Result, SobolevError};
pub use small_volume::{
    default_sobolev_constant, failure_measure, fit_through_origin, negative_test, small_volume_threshold,
    sobolev_constant_estimate, verify_small_volume_mp, LinearFit, NegativeTest, Slice, SmallVolumeReport, TrialRecord,
    CONSTANT_BETAS, SIGN_TOL,
};
pub use sobolev::{
    bump_family, family_lower_bound, norms, reflect_double, sobolev_exponent, sobolev_ratio, sobolev_table, SobolevRow,
    TestFunction, DEFAULT_RESOLUTION, FAMILY_CENTERS, FAMILY_EXPONENTS, TRUNCATION_FACTOR,
};
pub use table::write_csv;
