use crate::error::{Result, SobolevError};
use crate::sobolev::{family_lower_bound, DEFAULT_RESOLUTION};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sector_fem::{principal_eigenvalue, solve_linear, Coefficient, FemSpace, LinearProblem};
use sector_geometry::SectorSpec;
use sector_mesh::{generate, MeshOptions};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

/// Nodal values above this count as a violation of nonpositivity.
pub const SIGN_TOL: f64 = 1e-10;
/// Amplitudes over which the Sobolev constant `sup_β L_β β^{1/2}` is estimated.
pub const CONSTANT_BETAS: [f64; 4] = [PI / 8.0, PI / 4.0, PI / 2.0, PI];

/// `sup_β L_β β^{1/2}` over [`CONSTANT_BETAS`] for `p = 1`, `n = 2`: a lower bound on the
/// constant `C` with `C_β ≤ C β^{−1/2}`.
pub fn sobolev_constant_estimate(resolution: usize) -> Result<f64> {
    let rows: Result<Vec<_>> = CONSTANT_BETAS.par_iter().map(|&b| family_lower_bound(b, 1.0, resolution)).collect();
    Ok(rows?.iter().map(|r| r.scaled).fold(0.0, f64::max))
}

/// Measure bound `η β` with `η = (2 c₀^{1/2} C)^{−2}`.
pub fn small_volume_threshold(c0: f64, beta: f64, sobolev_constant: f64) -> Result<f64> {
    if !(c0 > 0.0 && beta > 0.0 && beta < 2.0 * PI && sobolev_constant > 0.0) {
        return Err(SobolevError::InvalidParameter(format!(
            "need c0 > 0, beta in (0, 2π), C > 0; got {c0}, {beta}, {sobolev_constant}"
        )));
    }
    Ok(beta / (4.0 * c0 * sobolev_constant * sobolev_constant))
}

/// The slice `𝒜_β ∩ {|x| < ρ}`: Dirichlet on the arc, Neumann on the rays. Problems on the
/// slice are solved on the unit sector after the dilation `x ↦ x/ρ`, which multiplies the
/// zeroth-order coefficient and the source by `ρ²`.
pub struct Slice {
    pub beta: f64,
    space: FemSpace,
}

impl Slice {
    pub fn new(beta: f64, h: f64) -> Result<Self> {
        let spec = SectorSpec::spherical(beta)?;
        let mesh = generate(&spec, MeshOptions::new(h))?;
        Ok(Self { beta, space: FemSpace::new(Arc::new(mesh)) })
    }

    pub fn space(&self) -> &FemSpace {
        &self.space
    }

    pub fn measure(&self, rho: f64) -> f64 {
        0.5 * self.beta * rho * rho
    }

    pub fn radius_for_measure(&self, measure: f64) -> f64 {
        (2.0 * measure / self.beta).sqrt()
    }

    /// Largest nodal value of the solution of `Δw + c w = s` on the slice of radius `rho`,
    /// `w = g` on the arc.
    pub fn max_solution(&self, rho: f64, c: Coefficient, source: Coefficient, dirichlet: Coefficient) -> Result<f64> {
        let r2 = rho * rho;
        let scale = |k: Coefficient| match k {
            Coefficient::Constant(v) => Coefficient::Constant(r2 * v),
            Coefficient::Nodal(v) => Coefficient::Nodal(v.into_iter().map(|x| r2 * x).collect()),
            Coefficient::Element(v) => Coefficient::Element(v.into_iter().map(|x| r2 * x).collect()),
        };
        let problem = LinearProblem { c: scale(c), source: scale(source), dirichlet, ..Default::default() };
        Ok(solve_linear(&self.space, &problem)?.max_value())
    }

    /// Principal eigenvalue of the discrete unit slice; the slice of radius `ρ` has `λ₁/ρ²`.
    pub fn unit_eigenvalue(&self) -> Result<f64> {
        Ok(principal_eigenvalue(&self.space)?.value)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub measure: f64,
    pub max_value: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallVolumeReport {
    pub beta: f64,
    pub c0: f64,
    pub threshold: f64,
    pub trials: Vec<TrialRecord>,
}

impl SmallVolumeReport {
    pub fn passed(&self) -> bool {
        self.trials.iter().all(|t| t.pass)
    }
}

/// Random subsolution trials on slices with measure below `threshold`: piecewise-constant
/// `|c| < c₀`, nonnegative source, nonpositive arc data, zero Neumann data. Trial `i` uses
/// seed `seed + i`.
pub fn verify_small_volume_mp(
    slice: &Slice,
    c0: f64,
    threshold: f64,
    trials: usize,
    seed: u64,
) -> Result<SmallVolumeReport> {
    let mesh = slice.space.mesh().clone();
    let records: Result<Vec<TrialRecord>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let measure = threshold * rng.gen_range(0.05..0.999);
            let c = Coefficient::Element((0..mesh.n_triangles()).map(|_| c0 * rng.gen_range(-1.0..1.0)).collect());
            let source = Coefficient::Element((0..mesh.n_triangles()).map(|_| rng.gen_range(0.0..1.0)).collect());
            let dirichlet = Coefficient::Nodal((0..mesh.n_vertices()).map(|_| -rng.gen_range(0.0..1.0)).collect());
            let max_value = slice.max_solution(slice.radius_for_measure(measure), c, source, dirichlet)?;
            Ok(TrialRecord { seed: s, measure, max_value, pass: max_value <= SIGN_TOL })
        })
        .collect();
    Ok(SmallVolumeReport { beta: slice.beta, c0, threshold, trials: records? })
}

/// Whether `c ≡ c` with unit source and zero arc data produces a positive value on the slice
/// of radius `rho`.
fn violates(slice: &Slice, rho: f64, c: f64) -> Result<bool> {
    Ok(slice.max_solution(rho, Coefficient::Constant(c), Coefficient::Constant(1.0), Coefficient::Constant(0.0))?
        > SIGN_TOL)
}

/// Smallest slice measure at which the constant coefficient `c` breaks nonpositivity, by
/// bisection on the radius to relative precision `rel_tol`.
pub fn failure_measure(slice: &Slice, c: f64, rel_tol: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(SobolevError::InvalidParameter("failure measure needs c > 0".into()));
    }
    let mut lo = 0.0;
    let mut hi = 1.0 / c.sqrt();
    while !violates(slice, hi, c)? {
        lo = hi;
        hi *= 1.25;
        if hi > 1e6 {
            return Err(SobolevError::InvalidParameter("no violation found".into()));
        }
    }
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if violates(slice, mid, c)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(slice.measure(hi))
}

/// Outcome of the deliberately oversized slice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativeTest {
    pub beta: f64,
    pub c: f64,
    pub unit_eigenvalue: f64,
    pub rho: f64,
    pub measure: f64,
    pub max_value: f64,
    pub detected: bool,
}

/// Solves on the slice whose discrete principal eigenvalue is `c/overshoot`, with `c ≡ c`,
/// unit source and zero arc data, and reports whether a positive value appears.
pub fn negative_test(slice: &Slice, c: f64, overshoot: f64) -> Result<NegativeTest> {
    let lambda1 = slice.unit_eigenvalue()?;
    let rho = (overshoot * lambda1 / c).sqrt();
    let max_value =
        slice.max_solution(rho, Coefficient::Constant(c), Coefficient::Constant(1.0), Coefficient::Constant(0.0))?;
    Ok(NegativeTest {
        beta: slice.beta,
        c,
        unit_eigenvalue: lambda1,
        rho,
        measure: slice.measure(rho),
        max_value,
        detected: max_value > SIGN_TOL,
    })
}

/// Least-squares slope of `measure = k β` through the origin and the largest relative
/// deviation of a point from the fit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub max_rel_deviation: f64,
}

pub fn fit_through_origin(points: &[(f64, f64)]) -> LinearFit {
    let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let slope = sxy / sxx;
    let max_rel_deviation = points.iter().map(|(x, y)| ((y - slope * x) / (slope * x)).abs()).fold(0.0, f64::max);
    LinearFit { slope, max_rel_deviation }
}

/// Default resolution of the Sobolev quadrature used for the threshold.
pub fn default_sobolev_constant() -> Result<f64> {
    sobolev_constant_estimate(DEFAULT_RESOLUTION)
}
