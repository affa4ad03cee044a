use crate::error::{Result, SobolevError};
use sector_geometry::Point;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Default cells per polar direction.
pub const DEFAULT_RESOLUTION: usize = 512;
/// Ratio between the truncation radius and the bump radius.
pub const TRUNCATION_FACTOR: f64 = 4.0;
/// Bump centers along the bisector, in units of the bump radius.
pub const FAMILY_CENTERS: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 3.0];
pub const FAMILY_EXPONENTS: [f64; 4] = [1.0, 1.5, 2.0, 3.0];

/// Radial bump `(1 − |x − c|/r)₊^e` restricted to the sector `𝒜_β = {0 < σ < β}` and
/// `|x| < R`, after `doublings` even reflections across the far flat boundary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    /// Amplitude of the sector carrying the unreflected bump.
    pub beta: f64,
    pub center: Point,
    pub radius: f64,
    pub exponent: f64,
    pub truncation: f64,
    /// The function lives on `𝒜_{2^k β}` with `k = doublings`.
    pub doublings: u32,
}

impl TestFunction {
    pub fn new(beta: f64, center: Point, radius: f64, exponent: f64) -> Result<Self> {
        let v = Self { beta, center, radius, exponent, truncation: TRUNCATION_FACTOR * radius, doublings: 0 };
        v.validate()?;
        Ok(v)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SobolevError::InvalidParameter(m));
        if !(self.beta > 0.0 && self.beta * (1u64 << self.doublings) as f64 <= 2.0 * PI + 1e-12) {
            return bad(format!("sector amplitude {} outside (0, 2π]", self.domain_angle()));
        }
        if !(self.radius > 0.0 && self.exponent >= 1.0) {
            return bad(format!("radius {} and exponent {} must be positive and >= 1", self.radius, self.exponent));
        }
        if self.center.norm() + self.radius > self.truncation * (1.0 + 1e-12) {
            return bad("bump support exceeds the truncation radius".into());
        }
        Ok(())
    }

    /// Amplitude `2^k β` of the sector carrying the function.
    pub fn domain_angle(&self) -> f64 {
        self.beta * (1u64 << self.doublings) as f64
    }

    /// Polar angle folded back into `[0, β]` by the reflections.
    fn fold(&self, sigma: f64) -> f64 {
        let t = sigma.rem_euclid(2.0 * self.beta);
        if t > self.beta {
            2.0 * self.beta - t
        } else {
            t
        }
    }

    /// Value and gradient magnitude at polar coordinates `(ϱ, σ)`.
    pub fn value_and_grad_norm(&self, rho: f64, sigma: f64) -> (f64, f64) {
        let y = Point::unit(self.fold(sigma)) * rho;
        let s = y.dist(self.center) / self.radius;
        if s >= 1.0 {
            return (0.0, 0.0);
        }
        let e = self.exponent;
        ((1.0 - s).powf(e), e * (1.0 - s).powf(e - 1.0) / self.radius)
    }

    /// The even reflection across the flat boundary `σ = 2^k β`, a test function on the
    /// doubled sector.
    pub fn reflect_double(&self) -> Result<Self> {
        let v = Self { doublings: self.doublings + 1, ..*self };
        v.validate()?;
        Ok(v)
    }

    /// `x ↦ v(s x)`.
    pub fn dilate(&self, s: f64) -> Self {
        Self { center: self.center * (1.0 / s), radius: self.radius / s, truncation: self.truncation / s, ..*self }
    }
}

/// Even reflection of `v`, which must live on `𝒜_β`, onto `𝒜_{2β}`.
pub fn reflect_double(v: &TestFunction, beta: f64) -> Result<TestFunction> {
    if (v.domain_angle() - beta).abs() > 1e-12 * beta.max(1.0) {
        return Err(SobolevError::InvalidParameter(format!(
            "test function lives on amplitude {}, not {beta}",
            v.domain_angle()
        )));
    }
    v.reflect_double()
}

/// `‖v‖_{L^q}` and `‖∇v‖_{L^p}` by the midpoint rule on a polar grid over `[0, R] × [0, 2^k β]`
/// with `resolution` radial cells and `resolution·2^k` angular cells, so a reflected function
/// is sampled at the mirror images of the original nodes.
pub fn norms(v: &TestFunction, p: f64, q: f64, resolution: usize) -> (f64, f64) {
    let nr = resolution;
    let ns = resolution << v.doublings;
    let dr = v.truncation / nr as f64;
    let ds = v.domain_angle() / ns as f64;
    let (mut iq, mut ip) = (0.0, 0.0);
    for i in 0..nr {
        let rho = (i as f64 + 0.5) * dr;
        let (mut rq, mut rp) = (0.0, 0.0);
        for j in 0..ns {
            let (val, grad) = v.value_and_grad_norm(rho, (j as f64 + 0.5) * ds);
            rq += val.abs().powf(q);
            rp += grad.powf(p);
        }
        iq += rq * rho;
        ip += rp * rho;
    }
    ((iq * dr * ds).powf(1.0 / q), (ip * dr * ds).powf(1.0 / p))
}

/// Sobolev exponent `q = np/(n − p)`.
pub fn sobolev_exponent(p: f64, n: u32) -> Result<f64> {
    let nf = n as f64;
    if n != 2 || !(p >= 1.0 && p < nf) {
        return Err(SobolevError::InvalidParameter(format!("need n = 2 and 1 <= p < n, got n = {n}, p = {p}")));
    }
    Ok(nf * p / (nf - p))
}

/// `‖v‖_{L^q}/‖∇v‖_{L^p}` on the sector carrying `v`, with `q = np/(n − p)`.
pub fn sobolev_ratio(v: &TestFunction, p: f64, n: u32, resolution: usize) -> Result<f64> {
    let q = sobolev_exponent(p, n)?;
    let (lq, gp) = norms(v, p, q, resolution);
    if gp == 0.0 {
        return Err(SobolevError::ZeroGradient);
    }
    Ok(lq / gp)
}

/// Bumps of radius `r` centered on the bisector of `𝒜_β` at [`FAMILY_CENTERS`] with profile
/// exponents [`FAMILY_EXPONENTS`].
pub fn bump_family(beta: f64, r: f64) -> Result<Vec<TestFunction>> {
    let dir = Point::unit(beta / 2.0);
    let mut out = Vec::with_capacity(FAMILY_CENTERS.len() * FAMILY_EXPONENTS.len());
    for &d in &FAMILY_CENTERS {
        for &e in &FAMILY_EXPONENTS {
            out.push(TestFunction::new(beta, dir * (d * r), r, e)?);
        }
    }
    Ok(out)
}

/// Row of the Sobolev table: `L_β`, the largest ratio over the family, and `L_β β^{1/n}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SobolevRow {
    pub beta: f64,
    pub l_beta: f64,
    pub scaled: f64,
}

/// `L_β` over [`bump_family`] with `p`, `n = 2`.
pub fn family_lower_bound(beta: f64, p: f64, resolution: usize) -> Result<SobolevRow> {
    let mut best = 0.0f64;
    for v in bump_family(beta, 1.0)? {
        best = best.max(sobolev_ratio(&v, p, 2, resolution)?);
    }
    Ok(SobolevRow { beta, l_beta: best, scaled: best * beta.sqrt() })
}

/// [`family_lower_bound`] over several amplitudes, in input order.
pub fn sobolev_table(betas: &[f64], p: f64, resolution: usize) -> Result<Vec<SobolevRow>> {
    use rayon::prelude::*;
    betas.par_iter().map(|&b| family_lower_bound(b, p, resolution)).collect()
}
