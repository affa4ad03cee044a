//! The doubled sector `Σ̃` (interior of the closure of `Σ ∪ Σ_*`, with `Σ_*` the mirror image of `Σ`
//! across `Γ_N⁻`) and its moving domains `D̃_{λ,ϑ}`.

use crate::critical::{lambda_check, theta_b};
use crate::domain::HValues;
use crate::error::{GeometryError, Result};
use crate::lines::MovingLine;
use crate::point::Point;
use crate::spec::{SectorSpec, BOUNDARY_TOL};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Mirror image across the line carrying `Γ_N⁻`.
pub fn reflect_across_lower_neumann(spec: &SectorSpec, x: Point) -> Point {
    spec.mirror_lower(x)
}

/// `true` on the open segment `Γ_N⁻` (endpoints excluded), within [`BOUNDARY_TOL`].
fn on_open_lower_neumann(spec: &SectorSpec, x: Point) -> bool {
    let d = spec.lower_dir();
    let t = x.dot(d);
    d.cross(x).abs() <= BOUNDARY_TOL && t > BOUNDARY_TOL && t < spec.l_n() - BOUNDARY_TOL
}

/// Membership in `Σ̃`.
pub fn double_domain_contains(spec: &SectorSpec, x: Point) -> bool {
    spec.contains(x) || spec.contains(spec.mirror_lower(x)) || on_open_lower_neumann(spec, x)
}

/// Labels of the pieces of `∂D̃_{λ,ϑ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoublePieceTag {
    /// On `T_{λ,ϑ}`.
    Gamma0,
    /// On `T_{h³, 2ϑ+β−π}`, inside `Σ_*`.
    Gamma1,
    /// The part of `T_{h¹, 2ϑ−β}` inside `Σ̄`.
    Gamma2A,
    /// The part of `T_{h¹, 2ϑ−β}` outside `Σ̄`.
    Gamma2B,
}

/// A segment of `∂D̃` with its tag.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoublePiece {
    pub tag: DoublePieceTag,
    pub start: Point,
    pub end: Point,
}

/// `D̃_{λ,ϑ}` in the regime `ϑ_B(λ) ≤ ϑ ≤ π/2`, `0 < λ ≤ l_⊥`, where it is an open triangle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DoubleMovingDomain {
    pub spec: SectorSpec,
    pub lambda: f64,
    pub theta: f64,
    pub h_values: HValues,
    /// Counter-clockwise triangle: the two points on `T_{λ,ϑ}` and the apex.
    pub triangle: [Point; 3],
    pub pieces: Vec<DoublePiece>,
}

impl DoubleMovingDomain {
    /// Builds `D̃_{λ,ϑ}`, rejecting parameters outside the triangle regime.
    pub fn new(spec: &SectorSpec, lambda: f64, theta: f64) -> Result<Self> {
        let l_perp = (spec.l_n() * spec.beta().cos()).max(0.0);
        if !(lambda > 0.0 && lambda <= l_perp) {
            return Err(GeometryError::OutOfRange { what: "lambda", value: lambda, lo: 0.0, hi: l_perp });
        }
        let tb = theta_b(spec, lambda);
        if !(theta >= tb - 1e-12 && theta <= FRAC_PI_2) {
            return Err(GeometryError::OutOfRange { what: "theta", value: theta, lo: tb, hi: FRAC_PI_2 });
        }
        let beta = spec.beta();
        let h1 = lambda_check(spec, lambda, theta)?;
        let h3 = lambda_check(spec, lambda, PI - theta)?;
        let t0 = MovingLine::new(spec, lambda, theta);
        let t1 = MovingLine::new(spec, h1, 2.0 * theta - beta);
        let t3 = MovingLine::new(spec, h3, 2.0 * theta + beta - PI);
        let degenerate = GeometryError::DomainViolation { what: "double_domain_triangle", theta };
        let q2 = t0.intersect(&t1).ok_or(degenerate.clone())?;
        let q3 = t0.intersect(&t3).ok_or(degenerate.clone())?;
        let apex = t1.intersect(&t3).ok_or(degenerate)?;
        let mut tri = [q2, q3, apex];
        if (tri[1] - tri[0]).cross(tri[2] - tri[0]) < 0.0 {
            tri.swap(0, 1);
        }
        let mut pieces = Vec::with_capacity(4);
        let (a, b) = if tri[0] == q2 { (q2, q3) } else { (q3, q2) };
        pieces.push(DoublePiece { tag: DoublePieceTag::Gamma0, start: a, end: b });
        pieces.push(DoublePiece { tag: DoublePieceTag::Gamma1, start: q3, end: apex });
        // `Γ̃²` runs from the apex to `q2`; it leaves `Σ̄` where it crosses the `Γ_N⁻` line.
        let d = spec.lower_dir();
        let (sa, sq) = (d.cross(apex), d.cross(q2));
        if sa * sq < 0.0 {
            let cut = apex.lerp(q2, sa / (sa - sq));
            let (inside_end, outside_end) = if sq > 0.0 { (q2, apex) } else { (apex, q2) };
            pieces.push(DoublePiece { tag: DoublePieceTag::Gamma2A, start: cut, end: inside_end });
            pieces.push(DoublePiece { tag: DoublePieceTag::Gamma2B, start: cut, end: outside_end });
        } else {
            let tag = if sa + sq > 0.0 { DoublePieceTag::Gamma2A } else { DoublePieceTag::Gamma2B };
            pieces.push(DoublePiece { tag, start: apex, end: q2 });
        }
        Ok(Self { spec: *spec, lambda, theta, h_values: HValues::new(spec, lambda, theta), triangle: tri, pieces })
    }

    /// Membership in the open triangle.
    pub fn triangle_contains(&self, x: Point) -> bool {
        let [a, b, c] = self.triangle;
        (b - a).cross(x - a) > 0.0 && (c - b).cross(x - b) > 0.0 && (a - c).cross(x - c) > 0.0
    }

    /// Membership by the defining conditions: `x ∈ Σ̃`, `x^{λ,ϑ} ∈ Σ̃`, positive side of `T_{λ,ϑ}`.
    pub fn contains(&self, x: Point) -> bool {
        double_moving_domain_contains(&self.spec, self.lambda, self.theta, x)
    }

    pub fn area(&self) -> f64 {
        let [a, b, c] = self.triangle;
        0.5 * (b - a).cross(c - a)
    }

    /// Segments carrying `tag`.
    pub fn pieces_with(&self, tag: DoublePieceTag) -> Vec<DoublePiece> {
        self.pieces.iter().copied().filter(|p| p.tag == tag).collect()
    }
}

/// Membership in `D̃_{λ,ϑ}` for arbitrary parameters.
pub fn double_moving_domain_contains(spec: &SectorSpec, lambda: f64, theta: f64, x: Point) -> bool {
    let line = MovingLine::new(spec, lambda, theta);
    line.signed_dist(x) > 0.0 && double_domain_contains(spec, x) && double_domain_contains(spec, line.reflect(x))
}
