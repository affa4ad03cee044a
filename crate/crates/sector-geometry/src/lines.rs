//! Moving lines `T_{λ,ϑ}`, their mirrored companions `T̂_{λ,ϑ}`, reflections and the polar angle `σ_λ`.

use crate::error::{GeometryError, Result};
use crate::point::Point;
use crate::spec::SectorSpec;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// The line through the pivot `P_λ` that makes angle `ϑ` with the lower Neumann direction.
///
/// With `mirrored = true` this is `T̂_{λ,ϑ}`, the image of `T_{λ,ϑ}` under `x₂ ↦ −x₂`.
/// The moving domain lies on the side where [`MovingLine::signed_dist`] is positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MovingLine {
    pub lambda: f64,
    pub theta: f64,
    pub beta: f64,
    pub mirrored: bool,
}

impl MovingLine {
    /// `T_{λ,ϑ}` for the sector `spec`. Any real `ϑ` is accepted.
    pub fn new(spec: &SectorSpec, lambda: f64, theta: f64) -> Self {
        Self::with_beta(spec.beta(), lambda, theta, false)
    }

    /// `T̂_{λ,ϑ}`, pivoting at the mirror of `P_λ` on the upper Neumann ray.
    pub fn mirrored(spec: &SectorSpec, lambda: f64, theta: f64) -> Self {
        Self::with_beta(spec.beta(), lambda, theta, true)
    }

    pub fn with_beta(beta: f64, lambda: f64, theta: f64, mirrored: bool) -> Self {
        MovingLine { lambda, theta, beta, mirrored }
    }

    /// `P_λ = λ·e_{−β/2}`, or its mirror image for `T̂`.
    pub fn pivot(&self) -> Point {
        let p = Point::unit(-self.beta / 2.0) * self.lambda;
        if self.mirrored {
            p.mirror_x2()
        } else {
            p
        }
    }

    /// Unit direction `e_{ϑ−β/2}` (mirrored for `T̂`).
    pub fn direction(&self) -> Point {
        let d = Point::unit(self.theta - self.beta / 2.0);
        if self.mirrored {
            d.mirror_x2()
        } else {
            d
        }
    }

    /// Unit normal `e_{ϑ−β/2−π/2}` (mirrored for `T̂`), pointing into the moving domain.
    pub fn normal(&self) -> Point {
        let n = Point::unit(self.theta - self.beta / 2.0 - PI / 2.0);
        if self.mirrored {
            n.mirror_x2()
        } else {
            n
        }
    }

    /// `(x₁ − x₁λ) sin(ϑ−β/2) − (x₂ − x₂λ) cos(ϑ−β/2)` for `T`; the mirrored form for `T̂`.
    pub fn signed_dist(&self, x: Point) -> f64 {
        (x - self.pivot()).dot(self.normal())
    }

    /// Mirror image `x^{λ,ϑ}` of `x` across the line.
    pub fn reflect(&self, x: Point) -> Point {
        x - self.normal() * (2.0 * self.signed_dist(x))
    }

    /// Intersection with another line, if not parallel.
    pub fn intersect(&self, other: &MovingLine) -> Option<Point> {
        crate::point::line_intersection(self.pivot(), self.direction(), other.pivot(), other.direction())
    }
}

/// Polar angle `σ_λ(x) ∈ [0, 2π)` about `P_λ`, measured from the lower Neumann direction:
/// `x − P_λ = r·e_{σ−β/2}`.
pub fn sigma(spec: &SectorSpec, lambda: f64, x: Point) -> Result<f64> {
    let d = x - MovingLine::new(spec, lambda, 0.0).pivot();
    if d.norm() == 0.0 {
        return Err(GeometryError::CoincidentWithPivot);
    }
    let s = (d.angle() + spec.beta() / 2.0).rem_euclid(TAU);
    Ok(if TAU - s < 1e-13 { 0.0 } else { s })
}

/// Reflects `x` across `T_{λ,ϑ}`.
pub fn reflect(line: &MovingLine, x: Point) -> Point {
    line.reflect(x)
}
