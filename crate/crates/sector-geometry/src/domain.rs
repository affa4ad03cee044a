//! Moving domains `D_{λ,ϑ,ϑ₁} = {x ∈ Σ : x^{λ,ϑ} ∈ Σ, ϑ₁ < σ_λ(x) < ϑ}` and their tagged boundary.

use crate::critical::{lambda_check, lambda_hat};
use crate::error::{GeometryError, Result};
use crate::lines::MovingLine;
use crate::point::{polygon_area, Point};
use crate::spec::SectorSpec;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Arc resolution of the polygonal approximation used for boundary pieces.
pub const DOMAIN_ARC_SEGMENTS: usize = 512;

/// Area below which a clipped domain counts as empty.
const EMPTY_AREA: f64 = 1e-14;

/// Boundary piece labels of a moving domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceTag {
    /// On `T_{λ,ϑ}`.
    Gamma0,
    /// On `Γ_D` or its reflection.
    Gamma1,
    /// On `T_{λ,ϑ₁}`.
    Gamma2A,
    /// On `T_{λ̌,ϑ̌}`, the reflection of the line carrying `Γ_N⁺`.
    Gamma2B,
    /// Any other flat piece.
    Other,
}

/// A boundary segment with its tag.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPiece {
    pub tag: PieceTag,
    pub start: Point,
    pub end: Point,
}

/// `(h⁰, h¹, h², h³) = (λ̂(λ,ϑ), λ̌(λ,ϑ), λ̂(λ,π−ϑ), λ̌(λ,π−ϑ))`; `None` at a singular angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HValues {
    pub h0: Option<f64>,
    pub h1: Option<f64>,
    pub h2: Option<f64>,
    pub h3: Option<f64>,
}

impl HValues {
    pub fn new(spec: &SectorSpec, lambda: f64, theta: f64) -> Self {
        Self {
            h0: lambda_hat(spec, lambda, theta).ok(),
            h1: lambda_check(spec, lambda, theta).ok(),
            h2: lambda_hat(spec, lambda, PI - theta).ok(),
            h3: lambda_check(spec, lambda, PI - theta).ok(),
        }
    }
}

/// `ϑ̌ = 2ϑ − β`.
pub fn theta_check(spec: &SectorSpec, theta: f64) -> f64 {
    2.0 * theta - spec.beta()
}

/// `ϑ̂ = π − 2ϑ + 2β`.
pub fn theta_hat(spec: &SectorSpec, theta: f64) -> f64 {
    PI - 2.0 * theta + 2.0 * spec.beta()
}

/// The default lower angle `max{2ϑ − π, 0}`.
pub fn default_theta1(theta: f64) -> f64 {
    (2.0 * theta - PI).max(0.0)
}

/// A moving domain with its polygonal boundary (counter-clockwise) and edge tags.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MovingDomain {
    pub spec: SectorSpec,
    pub lambda: f64,
    pub theta: f64,
    pub theta1: f64,
    pub h_values: HValues,
    /// `polygon[i] → polygon[i+1]` carries `tags[i]`.
    pub polygon: Vec<Point>,
    pub tags: Vec<PieceTag>,
}

/// Builds `D_{λ,ϑ,ϑ₁}`; `theta1` defaults to `max{2ϑ − π, 0}`.
pub fn moving_domain(spec: &SectorSpec, lambda: f64, theta: f64, theta1: Option<f64>) -> Result<MovingDomain> {
    let theta1 = theta1.unwrap_or_else(|| default_theta1(theta));
    if !(lambda >= 0.0) {
        return Err(GeometryError::OutOfRange { what: "lambda", value: lambda, lo: 0.0, hi: f64::INFINITY });
    }
    if !(theta > 0.0 && theta < PI) {
        return Err(GeometryError::OutOfRange { what: "theta", value: theta, lo: 0.0, hi: PI });
    }
    if !(theta1 >= 0.0 && theta1 < theta) {
        return Err(GeometryError::OutOfRange { what: "theta1", value: theta1, lo: 0.0, hi: theta });
    }
    let line = MovingLine::new(spec, lambda, theta);
    let line1 = MovingLine::new(spec, lambda, theta1);
    let reflected_lower_tag =
        if (theta1 - (2.0 * theta - PI)).abs() < 1e-15 { PieceTag::Gamma2A } else { PieceTag::Other };

    let sigma_poly = spec.boundary_polygon(DOMAIN_ARC_SEGMENTS);
    let sigma_tags = sector_edge_tags(sigma_poly.len(), PieceTag::Gamma2A, PieceTag::Gamma1, PieceTag::Other);
    let mut poly: Vec<(Point, PieceTag)> = sigma_poly.into_iter().zip(sigma_tags).collect();

    poly = clip(&poly, |x| line.signed_dist(x), PieceTag::Gamma0);
    poly = clip(&poly, |x| -line1.signed_dist(x), PieceTag::Gamma2A);

    // Reflection reverses orientation, so the reflected polygon is traversed backwards.
    let base = spec.boundary_polygon(DOMAIN_ARC_SEGMENTS);
    let base_tags = sector_edge_tags(base.len(), reflected_lower_tag, PieceTag::Gamma1, PieceTag::Gamma2B);
    let m = base.len();
    for i in 0..m {
        if poly.len() < 3 {
            break;
        }
        let j = (i + 1) % m;
        // Edge base[i] → base[j] becomes refl(base[j]) → refl(base[i]) in counter-clockwise order.
        let p = line.reflect(base[j]);
        let q = line.reflect(base[i]);
        let d = q - p;
        poly = clip(&poly, |x| d.cross(x - p), base_tags[i]);
    }

    let (polygon, tags): (Vec<Point>, Vec<PieceTag>) = poly.into_iter().unzip();
    let (polygon, tags) = if polygon.len() >= 3 && polygon_area(&polygon) > EMPTY_AREA {
        (polygon, tags)
    } else {
        (Vec::new(), Vec::new())
    };
    Ok(MovingDomain { spec: *spec, lambda, theta, theta1, h_values: HValues::new(spec, lambda, theta), polygon, tags })
}

/// Tags for the edges of `boundary_polygon`: `V → P₋`, the arc chords, then `P₊ → V`.
fn sector_edge_tags(n: usize, lower: PieceTag, arc: PieceTag, upper: PieceTag) -> Vec<PieceTag> {
    let mut tags = vec![arc; n];
    tags[0] = lower;
    tags[n - 1] = upper;
    tags
}

/// Sutherland–Hodgman clip of a tagged convex polygon against `{f > 0}`.
fn clip<F: Fn(Point) -> f64>(poly: &[(Point, PieceTag)], f: F, clip_tag: PieceTag) -> Vec<(Point, PieceTag)> {
    let n = poly.len();
    let mut out: Vec<(Point, PieceTag)> = Vec::with_capacity(n + 2);
    for i in 0..n {
        let (p, tag) = poly[i];
        let q = poly[(i + 1) % n].0;
        let (fp, fq) = (f(p), f(q));
        let p_in = fp > 0.0;
        let q_in = fq > 0.0;
        if p_in {
            out.push((p, tag));
        }
        if p_in != q_in {
            let t = fp / (fp - fq);
            let x = p.lerp(q, t);
            out.push((x, if p_in { clip_tag } else { tag }));
        }
    }
    dedupe(out)
}

/// Drops near-duplicate consecutive vertices, keeping the tag of the later one.
fn dedupe(poly: Vec<(Point, PieceTag)>) -> Vec<(Point, PieceTag)> {
    let mut out: Vec<(Point, PieceTag)> = Vec::with_capacity(poly.len());
    for (p, t) in poly {
        match out.last_mut() {
            Some(last) if last.0.dist(p) < 1e-12 => *last = (p, t),
            _ => out.push((p, t)),
        }
    }
    while out.len() > 1 && out[0].0.dist(out[out.len() - 1].0) < 1e-12 {
        out.pop();
    }
    out
}

impl MovingDomain {
    pub fn line(&self) -> MovingLine {
        MovingLine::new(&self.spec, self.lambda, self.theta)
    }

    pub fn is_empty(&self) -> bool {
        self.polygon.is_empty()
    }

    /// Exact membership: `x ∈ Σ`, `x^{λ,ϑ} ∈ Σ`, `ϑ₁ < σ_λ(x) < ϑ`.
    pub fn contains(&self, x: Point) -> bool {
        let line = self.line();
        let line1 = MovingLine::new(&self.spec, self.lambda, self.theta1);
        line.signed_dist(x) > 0.0
            && line1.signed_dist(x) < 0.0
            && self.spec.contains(x)
            && self.spec.contains(line.reflect(x))
    }

    /// Area of the polygonal approximation.
    pub fn area(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            polygon_area(&self.polygon)
        }
    }

    /// All boundary segments with their tags.
    pub fn pieces(&self) -> Vec<BoundaryPiece> {
        let n = self.polygon.len();
        (0..n)
            .map(|i| BoundaryPiece { tag: self.tags[i], start: self.polygon[i], end: self.polygon[(i + 1) % n] })
            .collect()
    }

    /// Segments carrying `tag`.
    pub fn pieces_with(&self, tag: PieceTag) -> Vec<BoundaryPiece> {
        self.pieces().into_iter().filter(|p| p.tag == tag).collect()
    }

    /// Total length of the segments carrying `tag`.
    pub fn piece_length(&self, tag: PieceTag) -> f64 {
        self.pieces_with(tag).iter().map(|p| p.start.dist(p.end)).sum()
    }

    /// The line `T_{λ̌,ϑ̌}` carrying `Γ²ᴮ`.
    pub fn gamma2b_line(&self) -> Option<MovingLine> {
        self.h_values.h1.map(|h1| MovingLine::new(&self.spec, h1, theta_check(&self.spec, self.theta)))
    }

    /// The centroid of the polygon, or `None` when empty.
    pub fn centroid(&self) -> Option<Point> {
        if self.is_empty() {
            return None;
        }
        let n = self.polygon.len();
        let (mut cx, mut cy, mut a2) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let p = self.polygon[i];
            let q = self.polygon[(i + 1) % n];
            let c = p.cross(q);
            a2 += c;
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        Some(Point::new(cx / (3.0 * a2), cy / (3.0 * a2)))
    }
}
