use crate::audit::{Audit, TOL_FLOOR};
use crate::error::Result;
use crate::shape::{monotonicity_x1, monotonicity_x2_half, symmetry_row};
use crate::sweep::{audit_sweep, ThetaPolicy};
use rayon::prelude::*;
use sector_fem::{solve_semilinear, FemSpace, NonlinearitySpec, ScalarField, SolveOptions};
use sector_geometry::{Point, SectorSpec};
use sector_mesh::{generate, MeshOptions};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

/// Factor between the largest calibrated excess and [`crate::KAPPA`].
pub const CALIBRATION_SAFETY: f64 = 2.0;
const CALIBRATION_BETAS: [f64; 2] = [PI / 3.0, PI / 2.0];
const CALIBRATION_H: [f64; 2] = [0.08, 0.04];
const CALIBRATION_LAMBDAS: [f64; 3] = [0.25, 0.5, 0.75];

/// The exact `const(1)` solution `(1 − |x|²)/4` on the spherical sector.
pub fn radial_exact(x: Point) -> f64 {
    0.25 * (1.0 - x.norm2())
}

/// Discrete `const(1)` solution on the spherical sector of amplitude `beta`, unsymmetric mesh.
pub fn radial_field(beta: f64, h: f64) -> Result<ScalarField> {
    let spec = SectorSpec::spherical(beta)?;
    let space = FemSpace::new(Arc::new(generate(&spec, MeshOptions::new(h))?));
    Ok(solve_semilinear(&space, &NonlinearitySpec::default(), &SolveOptions::default())?.0)
}

/// Largest excess `(max_violation − 1e−8)₊/h²` over the radial audits, per `(β, h)`, and the
/// resulting `κ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub kappa: f64,
    pub runs: Vec<(f64, f64, f64)>,
}

/// Audits the discrete radial solutions with `κ = 0`; every exact radial predicate holds with a
/// strict margin, so whatever positive violation remains is discretization noise. `κ` is
/// [`CALIBRATION_SAFETY`] times the largest such violation divided by `h²`.
pub fn calibrate_kappa() -> Result<Calibration> {
    let cases: Vec<(f64, f64)> =
        CALIBRATION_BETAS.iter().flat_map(|&b| CALIBRATION_H.iter().map(move |&h| (b, h))).collect();
    let runs: Result<Vec<(f64, f64, f64)>> = cases
        .par_iter()
        .map(|&(beta, h)| {
            let audit = Audit::new(radial_field(beta, h)?, 0.0);
            let mut rows = audit_sweep(&audit, &CALIBRATION_LAMBDAS, ThetaPolicy::default()).rows;
            rows.push(monotonicity_x1(&audit));
            rows.push(monotonicity_x2_half(&audit));
            rows.push(symmetry_row(&audit)?);
            let excess = rows
                .iter()
                .filter_map(|r| r.max_violation)
                .map(|v| (v - TOL_FLOOR).max(0.0) / (h * h))
                .fold(0.0, f64::max);
            Ok((beta, h, excess))
        })
        .collect();
    let runs = runs?;
    let kappa = CALIBRATION_SAFETY * runs.iter().map(|r| r.2).fold(0.0, f64::max);
    Ok(Calibration { kappa, runs })
}
