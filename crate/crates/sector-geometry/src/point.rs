//! Planar points and vectors.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// A point (or vector) in the plane, serialized as `[x, y]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Unit vector `e_θ = (cos θ, sin θ)`.
    pub fn unit(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Point { x: c, y: s }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Scalar cross product `self × other`.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Polar angle in `(-π, π]`.
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Mirror image across the horizontal axis.
    pub fn mirror_x2(self) -> Self {
        Point { x: self.x, y: -self.y }
    }

    /// Counterclockwise rotation by a quarter turn.
    pub fn perp(self) -> Self {
        Point { x: -self.y, y: self.x }
    }

    pub fn lerp(self, other: Point, t: f64) -> Self {
        self + (other - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point { x: a[0], y: a[1] }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point { x: self.x + o.x, y: self.y + o.y }
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point { x: self.x - o.x, y: self.y - o.y }
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point { x: self.x * s, y: self.y * s }
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point { x: -self.x, y: -self.y }
    }
}

/// Euclidean distance from `p` to the closed segment `[a, b]`.
pub fn dist_to_segment(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm2();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Intersection of the lines `p + s·d` and `q + t·e`, if they are not parallel.
pub fn line_intersection(p: Point, d: Point, q: Point, e: Point) -> Option<Point> {
    let den = d.cross(e);
    if den.abs() < 1e-300 {
        return None;
    }
    let s = (q - p).cross(e) / den;
    Some(p + d * s)
}

/// Area of a simple polygon, positive for counterclockwise vertex order.
pub fn polygon_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| poly[i].cross(poly[(i + 1) % n])).sum::<f64>() * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_vectors_and_products() {
        let e = Point::unit(std::f64::consts::FRAC_PI_2);
        assert!((e.x).abs() < 1e-16 && (e.y - 1.0).abs() < 1e-16);
        assert_eq!(Point::new(1.0, 0.0).cross(Point::new(0.0, 1.0)), 1.0);
        assert_eq!(Point::new(3.0, 4.0).norm(), 5.0);
    }

    #[test]
    fn segment_distance() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(2.0, 0.0);
        assert_eq!(dist_to_segment(Point::new(1.0, 1.0), a, b), 1.0);
        assert_eq!(dist_to_segment(Point::new(3.0, 0.0), a, b), 1.0);
    }

    #[test]
    fn intersection_of_axes() {
        let p =
            line_intersection(Point::new(0.0, 1.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0), Point::new(0.0, 1.0))
                .unwrap();
        assert_eq!(p, Point::new(2.0, 1.0));
    }

    #[test]
    fn ccw_square_area() {
        let sq = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)];
        assert_eq!(polygon_area(&sq), 1.0);
    }

    #[test]
    fn serializes_as_pair() {
        let s = serde_json_like(Point::new(1.5, -2.0));
        assert_eq!(s, [1.5, -2.0]);
    }

    fn serde_json_like(p: Point) -> [f64; 2] {
        p.into()
    }
}
