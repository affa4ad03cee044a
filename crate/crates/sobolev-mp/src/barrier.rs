use crate::bessel::{bessel_j0, bessel_j0_first_zero};
use crate::error::{Result, SobolevError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sector_geometry::Point;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Step of the centered second differences cross-checking the Bessel Laplacian.
pub const FD_STEP: f64 = 1e-5;

/// Outcome of sampling `Δg + c g` for a barrier `g` and coefficients `|c| < c₀`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarrierCheck {
    pub c0: f64,
    pub eta: f64,
    pub samples: usize,
    /// Largest sampled `Δg + c g`; negative when the barrier is a strict upper solution.
    pub max_value: f64,
    /// Largest sampled `Δg + c g + (c₀ − |c|) g`; nonpositive by the identity `Δg = −c₀ g`.
    pub max_margin_excess: f64,
    /// Largest relative gap between the analytic and finite-difference Laplacians, when checked.
    pub max_fd_rel_error: Option<f64>,
}

impl BarrierCheck {
    pub fn passed(&self) -> bool {
        self.max_value < 0.0 && self.max_margin_excess <= 1e-12
    }
}

fn check_c0(c0: f64) -> Result<()> {
    if c0 > 0.0 && c0.is_finite() {
        Ok(())
    } else {
        Err(SobolevError::InvalidParameter(format!("c0 = {c0} must be positive")))
    }
}

/// Width `η = π/(2√c₀)` of the band on which `sin(π x₁/(2η))` is a positive upper solution.
pub fn narrow_band_threshold(c0: f64) -> Result<f64> {
    check_c0(c0)?;
    Ok(PI / (2.0 * c0.sqrt()))
}

/// Samples `Δg + c g` for `g = sin(π x₁/(2η))` at `0 < x₁ < η` and `|c| < c₀`.
pub fn check_barrier_narrow(c0: f64, samples: usize, seed: u64) -> Result<BarrierCheck> {
    let eta = narrow_band_threshold(c0)?;
    let k = PI / (2.0 * eta);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut max_value, mut max_excess) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for _ in 0..samples {
        let x1 = eta * rng.gen_range(f64::EPSILON..1.0);
        let c = c0 * rng.gen_range(-1.0..1.0);
        let g = (k * x1).sin();
        let lap = -k * k * g;
        let v = lap + c * g;
        max_value = max_value.max(v);
        max_excess = max_excess.max(v + (c0 - c.abs()) * g);
    }
    Ok(BarrierCheck { c0, eta, samples, max_value, max_margin_excess: max_excess, max_fd_rel_error: None })
}

/// Radius `η = j₀/√c₀` of the region on which `J₀(j₀ ϱ/η)` is a positive upper solution.
pub fn sector_band_threshold(c0: f64) -> Result<f64> {
    check_c0(c0)?;
    Ok(bessel_j0_first_zero() / c0.sqrt())
}

/// The Bessel barrier `g(x) = J₀(j₀|x|/η)`.
pub fn bessel_barrier(x: Point, eta: f64) -> f64 {
    bessel_j0(bessel_j0_first_zero() * x.norm() / eta)
}

/// Five-point Laplacian of `g` at `x` with step `d`.
pub fn fd_laplacian(g: impl Fn(Point) -> f64, x: Point, d: f64) -> f64 {
    let c = g(x);
    let sum = g(Point::new(x.x + d, x.y))
        + g(Point::new(x.x - d, x.y))
        + g(Point::new(x.x, x.y + d))
        + g(Point::new(x.x, x.y - d));
    (sum - 4.0 * c) / (d * d)
}

/// Five-point Laplacian of the Bessel barrier with step `d`, evaluated in difference form:
/// with `g(x) = Σ_k (−a|x|²)^k/(k!)²` and `a = (j₀/η)²/4`, each neighbour difference
/// `g(x + δ) − g(x)` is summed through the binomial expansion of `(s + δ_s)^k − s^k`, so the
/// result carries no cancellation error of order `ε/d²`.
pub fn bessel_barrier_fd_laplacian(x: Point, eta: f64, d: f64) -> f64 {
    let a = (bessel_j0_first_zero() / eta).powi(2) / 4.0;
    let s = x.norm2();
    let shifts = [2.0 * d * x.x + d * d, -2.0 * d * x.x + d * d, 2.0 * d * x.y + d * d, -2.0 * d * x.y + d * d];
    let mut total = 0.0;
    for ds in shifts {
        let mut coef = 1.0;
        let mut diff = 0.0;
        for k in 1..60 {
            coef *= -a / (k * k) as f64;
            // (s + ds)^k − s^k = Σ_{m=1}^{k} C(k, m) s^{k−m} ds^m
            let mut binom = 1.0;
            let mut inc = 0.0;
            for m in 1..=k {
                binom *= (k - m + 1) as f64 / m as f64;
                inc += binom * s.powi(k - m) * ds.powi(m);
            }
            let term = coef * inc;
            diff += term;
            if term.abs() <= 1e-18 * diff.abs() && k > 4 {
                break;
            }
        }
        total += diff;
    }
    total / (d * d)
}

/// Samples `Δg + c g` for the Bessel barrier at points of the sector `0 < σ < β` with
/// `|x| < η` and `|c| < c₀`. The analytic Laplacian `−(j₀/η)² g` is cross-checked by
/// [`bessel_barrier_fd_laplacian`] with step [`FD_STEP`], relative to `c₀ max g = c₀`.
pub fn check_barrier_sector(c0: f64, beta: f64, samples: usize, seed: u64) -> Result<BarrierCheck> {
    let eta = sector_band_threshold(c0)?;
    if !(beta > 0.0 && beta < 2.0 * PI) {
        return Err(SobolevError::InvalidParameter(format!("beta = {beta} outside (0, 2π)")));
    }
    let j0 = bessel_j0_first_zero();
    let k2 = (j0 / eta).powi(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut max_value, mut max_excess, mut max_fd) = (f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0f64);
    let g = |x: Point| bessel_barrier(x, eta);
    for _ in 0..samples {
        // Area-uniform radius; keep a step clear of the vertex for the stencil.
        let rho = eta * rng.gen_range(0.0f64..1.0).sqrt().max(1e-3);
        let sigma = beta * rng.gen_range(0.0..1.0);
        let x = Point::unit(sigma) * rho;
        let c = c0 * rng.gen_range(-1.0..1.0);
        let gx = g(x);
        let lap = -k2 * gx;
        let v = lap + c * gx;
        max_value = max_value.max(v);
        max_excess = max_excess.max(v + (c0 - c.abs()) * gx);
        max_fd = max_fd.max((bessel_barrier_fd_laplacian(x, eta, FD_STEP) - lap).abs() / c0);
    }
    Ok(BarrierCheck { c0, eta, samples, max_value, max_margin_excess: max_excess, max_fd_rel_error: Some(max_fd) })
}
