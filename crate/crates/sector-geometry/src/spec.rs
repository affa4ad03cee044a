//! The sector `Σ_{α,β}` in the canonical frame: vertex `V` at the origin, circle center `O = (−a, 0)`.

use crate::error::{GeometryError, Result};
use crate::point::Point;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Absolute tolerance for boundary membership in the unit-radius frame.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Opening angles of a sub-spherical sector: `alpha` at the circle center, `beta` at the vertex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct SectorSpec {
    alpha: f64,
    beta: f64,
}

#[derive(Deserialize)]
struct RawSpec {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawSpec> for SectorSpec {
    type Error = GeometryError;
    fn try_from(r: RawSpec) -> Result<Self> {
        SectorSpec::relaxed(r.alpha, r.beta)
    }
}

/// Boundary or interior class of a point relative to `Σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointClass {
    Interior,
    DirichletArc,
    NeumannLower,
    NeumannUpper,
    Vertex,
    MixedPlus,
    MixedMinus,
    Exterior,
}

impl SectorSpec {
    /// Audit-grade sector: `0 < β < α ≤ π`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let s = Self::relaxed(alpha, beta)?;
        if beta >= alpha {
            return Err(GeometryError::InvalidSpec(format!(
                "audit-grade sector needs beta < alpha (alpha = {alpha}, beta = {beta})"
            )));
        }
        Ok(s)
    }

    /// Sector allowing the spherical case `β = α`: `0 < β ≤ α ≤ π`.
    pub fn relaxed(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(GeometryError::InvalidSpec("angles must be finite".into()));
        }
        if !(beta > 0.0 && beta <= alpha && alpha <= PI && beta < 2.0 * PI) {
            return Err(GeometryError::InvalidSpec(format!(
                "need 0 < beta <= alpha <= pi (alpha = {alpha}, beta = {beta})"
            )));
        }
        Ok(SectorSpec { alpha, beta })
    }

    /// Spherical sector `α = β`, so that `a = 0`.
    pub fn spherical(beta: f64) -> Result<Self> {
        Self::relaxed(beta, beta)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// True when `α = β`, i.e. `V = O`.
    pub fn is_spherical(&self) -> bool {
        self.alpha == self.beta
    }

    /// Signed offset `a = cos(α/2) − sin(α/2)·cot(β/2) = −sin((α−β)/2)/sin(β/2)`.
    pub fn a(&self) -> f64 {
        -((self.alpha - self.beta) / 2.0).sin() / (self.beta / 2.0).sin()
    }

    /// Length of each Neumann side, `sin(α/2)/sin(β/2)`.
    pub fn l_n(&self) -> f64 {
        (self.alpha / 2.0).sin() / (self.beta / 2.0).sin()
    }

    pub fn vertex(&self) -> Point {
        Point::ORIGIN
    }

    /// Circle center `O = (−a, 0)`.
    pub fn center(&self) -> Point {
        Point::new(-self.a(), 0.0)
    }

    /// Upper mixed point `P₊ = (cos(α/2) − a, sin(α/2))`.
    pub fn p_plus(&self) -> Point {
        Point::new((self.alpha / 2.0).cos() - self.a(), (self.alpha / 2.0).sin())
    }

    /// Lower mixed point `P₋`.
    pub fn p_minus(&self) -> Point {
        self.p_plus().mirror_x2()
    }

    /// Unit direction of `Γ_N⁻`, `e_{−β/2}`.
    pub fn lower_dir(&self) -> Point {
        Point::unit(-self.beta / 2.0)
    }

    /// Unit direction of `Γ_N⁺`, `e_{β/2}`.
    pub fn upper_dir(&self) -> Point {
        Point::unit(self.beta / 2.0)
    }

    /// Point of the circle at polar angle `θ` about `O`.
    pub fn arc_point(&self, theta: f64) -> Point {
        self.center() + Point::unit(theta)
    }

    /// Distance from `V` to the Dirichlet arc along direction `e_φ`, `|φ| ≤ β/2`.
    pub fn radius_from_vertex(&self, phi: f64) -> f64 {
        let a = self.a();
        let s = phi.sin();
        -a * phi.cos() + (1.0 - a * a * s * s).max(0.0).sqrt()
    }

    /// Exact area: triangle `V P₋ P₊` plus the circular segment over the chord.
    pub fn area(&self) -> f64 {
        let h = self.alpha / 2.0;
        (h.cos() - self.a()) * h.sin() + 0.5 * (self.alpha - self.alpha.sin())
    }

    /// Strict membership in the open sector `Σ`.
    pub fn contains(&self, x: Point) -> bool {
        let (s, c) = (self.beta / 2.0).sin_cos();
        if x.y.abs() >= 1.0 || x.y.abs() * c >= x.x * s {
            return false;
        }
        x.x < (1.0 - x.y * x.y).sqrt() - self.a()
    }

    /// Membership in the closure of `Σ` with the boundary tolerance.
    pub fn contains_closed(&self, x: Point) -> bool {
        self.contains(x) || self.classify_point(x) != PointClass::Exterior
    }

    /// Classifies `x` as interior, one of the boundary pieces or corners, or exterior.
    pub fn classify_point(&self, x: Point) -> PointClass {
        let tol = BOUNDARY_TOL;
        if x.dist(self.vertex()) <= tol {
            return PointClass::Vertex;
        }
        if x.dist(self.p_plus()) <= tol {
            return PointClass::MixedPlus;
        }
        if x.dist(self.p_minus()) <= tol {
            return PointClass::MixedMinus;
        }
        let l_n = self.l_n();
        for (dir, class) in [(self.lower_dir(), PointClass::NeumannLower), (self.upper_dir(), PointClass::NeumannUpper)]
        {
            let t = x.dot(dir);
            if x.cross(dir).abs() <= tol && t > 0.0 && t < l_n {
                return class;
            }
        }
        let r = x - self.center();
        if (r.norm() - 1.0).abs() <= tol && r.angle().abs() <= self.alpha / 2.0 {
            return PointClass::DirichletArc;
        }
        if self.contains(x) {
            PointClass::Interior
        } else {
            PointClass::Exterior
        }
    }

    /// Mirror image across the line carrying `Γ_N⁻`.
    pub fn mirror_lower(&self, x: Point) -> Point {
        let d = self.lower_dir();
        d * (2.0 * x.dot(d)) - x
    }

    /// Distance from `x` to `∂Σ` for `x` in the closed sector.
    pub fn dist_to_boundary(&self, x: Point) -> f64 {
        let l_n = self.l_n();
        let d_lower = crate::point::dist_to_segment(x, Point::ORIGIN, self.lower_dir() * l_n);
        let d_upper = crate::point::dist_to_segment(x, Point::ORIGIN, self.upper_dir() * l_n);
        let r = x - self.center();
        let d_arc = if r.angle().abs() <= self.alpha / 2.0 {
            (1.0 - r.norm()).abs()
        } else {
            x.dist(self.p_plus()).min(x.dist(self.p_minus()))
        };
        d_lower.min(d_upper).min(d_arc)
    }

    /// Counterclockwise polygon `V, P₋, arc…, P₊` with `n_arc` arc segments.
    pub fn boundary_polygon(&self, n_arc: usize) -> Vec<Point> {
        let n = n_arc.max(1);
        let h = self.alpha / 2.0;
        let mut poly = Vec::with_capacity(n + 2);
        poly.push(Point::ORIGIN);
        poly.push(self.p_minus());
        for k in 1..n {
            poly.push(self.arc_point(-h + self.alpha * k as f64 / n as f64));
        }
        poly.push(self.p_plus());
        poly
    }
}
