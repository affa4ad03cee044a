//! Isosceles-triangle configuration `V A₂ A₁` with a point `O` on the median `VH` and a point `P`
//! on the side `V A₁`, and the four inequalities between `ϑ_A = ∠A₁PO` and `ϑ_B = ∠A₁PA₂`.
//!
//! Points are built directly from `(α, β)` in a frame with `V` at the origin and the median along
//! the positive `x₁`-axis, normalized so that `|O A₁| = 1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sector_geometry::point::line_intersection;
use sector_geometry::Point;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Boundary layer in `s` excluded from strictness sweeps.
pub const S_LAYER: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AngleError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(&'static str),
}

pub type Result<T> = std::result::Result<T, AngleError>;

/// `∠A₁OA₂ = α`, `∠A₁VA₂ = β`, and `P = s·P̄` on the open segment `V P̄`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleConfig {
    pub alpha: f64,
    pub beta: f64,
    pub s: f64,
}

/// The constructed points of a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrianglePoints {
    pub v: Point,
    pub o: Point,
    pub h: Point,
    pub a1: Point,
    pub a2: Point,
    pub p_bar: Point,
    pub p: Point,
}

impl TriangleConfig {
    /// Validates `0 < β < α ≤ π` and `0 < s < 1`.
    pub fn new(alpha: f64, beta: f64, s: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < alpha && alpha <= PI) {
            return Err(AngleError::InvalidConfig(format!(
                "need 0 < beta < alpha <= pi, got alpha={alpha}, beta={beta}"
            )));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(AngleError::InvalidConfig(format!("need 0 < s < 1, got s={s}")));
        }
        Ok(Self { alpha, beta, s })
    }

    /// Builds `V, O, H, A₁, A₂`, then `P̄ = A₂O ∩ VA₁` and `P = s·P̄`.
    pub fn points(&self) -> Result<TrianglePoints> {
        let (hb, ha) = (self.beta / 2.0, self.alpha / 2.0);
        let side = ha.sin() / hb.sin();
        let v = Point::ORIGIN;
        let a1 = Point::new(side * hb.cos(), -side * hb.sin());
        let a2 = Point::new(side * hb.cos(), side * hb.sin());
        let h = Point::new(a1.x, 0.0);
        let o = Point::new(h.x - ha.cos(), 0.0);
        let p_bar = line_intersection(a2, o - a2, v, a1 - v).ok_or(AngleError::Degenerate("A2O parallel to VA1"))?;
        if o.x < -1e-15 || o.x > h.x + 1e-15 {
            return Err(AngleError::Degenerate("O outside segment VH"));
        }
        Ok(TrianglePoints { v, o, h, a1, a2, p_bar, p: p_bar * self.s })
    }
}

/// Unsigned angle `∠(u, w) ∈ [0, π]`.
fn angle_between(u: Point, w: Point) -> Result<f64> {
    let (nu, nw) = (u.norm(), w.norm());
    if nu == 0.0 || nw == 0.0 {
        return Err(AngleError::Degenerate("zero-length ray"));
    }
    Ok((u.dot(w) / (nu * nw)).clamp(-1.0, 1.0).acos())
}

/// `(ϑ_A, ϑ_B) = (∠A₁PO, ∠A₁PA₂)`.
pub fn angles_at_p(config: &TriangleConfig) -> Result<(f64, f64)> {
    let pts = config.points()?;
    let ta = angle_between(pts.a1 - pts.p, pts.o - pts.p)?;
    let tb = angle_between(pts.a1 - pts.p, pts.a2 - pts.p)?;
    if !(ta > 0.0 && ta < PI && tb > 0.0 && tb < PI) {
        return Err(AngleError::Degenerate("collinear rays at P"));
    }
    Ok((ta, tb))
}

/// Signed margins of the four inequalities; each must be positive when reported.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleMargins {
    pub theta_a: f64,
    pub theta_b: f64,
    /// `2ϑ_A − ϑ_B`.
    pub m1: f64,
    /// `(π+β)/2 − (2ϑ_B − ϑ_A)`, reported when `ϑ_B < π/2`.
    pub m2: Option<f64>,
    /// `π − (2ϑ_B − ϑ_A)`, reported when `β ≤ 2π/3`.
    pub m3: Option<f64>,
    /// `π − (2ϑ_B − ϑ_A)`, reported when `ϑ_A ≥ β`.
    pub m4: Option<f64>,
}

impl TriangleMargins {
    /// Smallest reported margin.
    pub fn min(&self) -> f64 {
        [Some(self.m1), self.m2, self.m3, self.m4].into_iter().flatten().fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates the four margins.
pub fn check_triangle_relations(config: &TriangleConfig) -> Result<TriangleMargins> {
    let (ta, tb) = angles_at_p(config)?;
    let excess = 2.0 * tb - ta;
    let beta = config.beta;
    Ok(TriangleMargins {
        theta_a: ta,
        theta_b: tb,
        m1: 2.0 * ta - tb,
        m2: (tb < PI / 2.0).then(|| (PI + beta) / 2.0 - excess),
        m3: (beta <= 2.0 * PI / 3.0).then_some(PI - excess),
        m4: (ta >= beta).then_some(PI - excess),
    })
}

/// `f(t, κ) = 2 arctan(((κ+εκ+2t+εt)κ)/(κ+εκ+εt)) − arctan t + arctan κ − π`.
pub fn f_aux(t: f64, kappa: f64, epsilon: f64) -> f64 {
    let num = (kappa + epsilon * kappa + 2.0 * t + epsilon * t) * kappa;
    let den = kappa + epsilon * kappa + epsilon * t;
    2.0 * (num / den).atan() - t.atan() + kappa.atan() - PI
}

/// Which inequality a sweep targets; configs outside its hypothesis are redrawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Always,
    ThetaBBelowRightAngle,
    BetaAtMostTwoThirdsPi,
    ThetaAAtLeastBeta,
}

impl Regime {
    pub const ALL: [Regime; 4] =
        [Regime::Always, Regime::ThetaBBelowRightAngle, Regime::BetaAtMostTwoThirdsPi, Regime::ThetaAAtLeastBeta];

    fn margin(self, m: &TriangleMargins) -> Option<f64> {
        match self {
            Regime::Always => Some(m.m1),
            Regime::ThetaBBelowRightAngle => m.m2,
            Regime::BetaAtMostTwoThirdsPi => m.m3,
            Regime::ThetaAAtLeastBeta => m.m4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::Always => "i",
            Regime::ThetaBBelowRightAngle => "ii",
            Regime::BetaAtMostTwoThirdsPi => "iii",
            Regime::ThetaAAtLeastBeta => "iv",
        }
    }
}

/// Outcome of a seeded sweep over one regime.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub regime: Regime,
    pub samples: usize,
    pub draws: usize,
    pub min_margin: f64,
    pub worst: Option<TriangleConfig>,
    pub violations: usize,
}

impl SweepSummary {
    pub fn passed(&self, threshold: f64) -> bool {
        self.violations == 0 && self.min_margin > threshold
    }
}

/// Draws `(α, β, s)` with `0 < β < α ≤ π` and `s ∈ [S_LAYER, 1 − S_LAYER]`.
pub fn random_config(rng: &mut impl Rng) -> TriangleConfig {
    loop {
        let beta = rng.gen_range(1e-3..PI - 1e-3);
        let alpha = rng.gen_range(beta..=PI);
        let s = rng.gen_range(S_LAYER..=1.0 - S_LAYER);
        if let Ok(c) = TriangleConfig::new(alpha, beta, s) {
            return c;
        }
    }
}

/// Collects `samples` configs satisfying the regime hypothesis and records the worst margin;
/// a margin `≤ threshold` counts as a violation.
pub fn sweep(regime: Regime, samples: usize, seed: u64, threshold: f64) -> SweepSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary =
        SweepSummary { regime, samples: 0, draws: 0, min_margin: f64::INFINITY, worst: None, violations: 0 };
    while summary.samples < samples {
        let mut c = random_config(&mut rng);
        if regime == Regime::BetaAtMostTwoThirdsPi && c.beta > 2.0 * PI / 3.0 {
            // Keep the draw count finite by folding β into the hypothesis range.
            c.beta *= 2.0 / 3.0;
            if c.beta >= c.alpha {
                continue;
            }
        }
        summary.draws += 1;
        let Ok(m) = check_triangle_relations(&c) else { continue };
        let Some(margin) = regime.margin(&m) else { continue };
        summary.samples += 1;
        if margin <= threshold {
            summary.violations += 1;
        }
        if margin < summary.min_margin {
            summary.min_margin = margin;
            summary.worst = Some(c);
        }
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_at_vertex() {
        let c = TriangleConfig::new(2.0 * PI / 3.0, PI / 3.0, 1e-9).unwrap();
        let (ta, tb) = angles_at_p(&c).unwrap();
        assert!((ta - c.beta / 2.0).abs() < 1e-7);
        assert!((tb - c.beta).abs() < 1e-7);
        let m = check_triangle_relations(&c).unwrap();
        assert!(m.m1 > 0.0 && m.m1 < 1e-7);
    }

    #[test]
    fn equal_angles_rejected() {
        assert!(matches!(TriangleConfig::new(1.0, 1.0, 0.5), Err(AngleError::InvalidConfig(_))));
        assert!(TriangleConfig::new(2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn midpoint_example() {
        let c = TriangleConfig::new(2.0 * PI / 3.0, PI / 3.0, 0.5).unwrap();
        let (ta, tb) = angles_at_p(&c).unwrap();
        assert!(ta.is_finite() && tb.is_finite());
        assert!(tb < 2.0 * ta);
    }

    #[test]
    fn construction_invariants() {
        let c = TriangleConfig::new(2.4, 1.1, 0.3).unwrap();
        let p = c.points().unwrap();
        assert!((p.o.dist(p.a1) - 1.0).abs() < 1e-14);
        assert!((p.o.dist(p.a2) - 1.0).abs() < 1e-14);
        assert!(((p.a1 - p.o).angle().abs() * 2.0 - c.alpha).abs() < 1e-13);
        assert!((p.v.dist(p.a1) - p.v.dist(p.a2)).abs() < 1e-14);
        assert!((p.a2 - p.o).cross(p.p_bar - p.o).abs() < 1e-13);
    }

    #[test]
    fn f_aux_closed_values() {
        let k = 3f64.sqrt();
        for eps in [0.0, 0.5, 3.0] {
            assert!(f_aux(0.0, k, eps).abs() < 1e-12);
            assert!((f_aux(0.0, 0.7, eps) - (3.0 * 0.7f64.atan() - PI)).abs() < 1e-12);
        }
    }

    #[test]
    fn small_sweep_is_deterministic() {
        let a = sweep(Regime::Always, 200, 3, 1e-10);
        let b = sweep(Regime::Always, 200, 3, 1e-10);
        assert_eq!(a, b);
        assert_eq!(a.samples, 200);
    }
}
