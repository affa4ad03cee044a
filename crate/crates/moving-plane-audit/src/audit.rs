use crate::error::{AuditError, Result};
use faer::prelude::*;
use faer::Mat;
use sector_fem::ScalarField;
use sector_geometry::{Point, SectorSpec};
use sector_mesh::Mesh;

/// Tolerance constant `κ` of `1e−8 + κh²`, calibrated on the radial case by
/// [`crate::calibrate_kappa`].
pub const KAPPA: f64 = 0.21;
/// Absolute part of every audit tolerance.
pub const TOL_FLOOR: f64 = 1e-8;
/// Sample points per moving line.
pub const LINE_SAMPLES: usize = 256;
/// Radius of the least-squares gradient reconstruction, in units of `h`.
pub const LS_RADIUS: f64 = 4.0;

/// `1e−8 + κh²`.
pub fn audit_tolerance(kappa: f64, h: f64) -> f64 {
    TOL_FLOOR + kappa * h * h
}

/// A solution field under audit with the tolerance constant of the run.
#[derive(Clone, Debug)]
pub struct Audit {
    field: ScalarField,
    kappa: f64,
    nodes: NodeGrid,
}

impl Audit {
    pub fn new(field: ScalarField, kappa: f64) -> Self {
        let nodes = NodeGrid::new(field.mesh(), LS_RADIUS * field.mesh().h);
        Self { field, kappa, nodes }
    }

    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    pub fn mesh(&self) -> &Mesh {
        self.field.mesh()
    }

    pub fn spec(&self) -> SectorSpec {
        self.mesh().spec
    }

    /// Nominal mesh size.
    pub fn h(&self) -> f64 {
        self.mesh().h
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn tolerance(&self) -> f64 {
        audit_tolerance(self.kappa, self.h())
    }

    /// Width of the boundary collar excluded from derivative and sign checks.
    pub fn collar(&self) -> f64 {
        2.0 * self.h()
    }

    pub(crate) fn angles(&self) -> (f64, f64) {
        let s = self.spec();
        (s.alpha(), s.beta())
    }

    pub(crate) fn value(&self, x: Point) -> Result<f64> {
        Ok(self.field.evaluate_near(x, self.h())?)
    }

    /// Recovered gradient at `x`, the least-squares quadratic fit of [`ls_gradient`].
    pub fn gradient(&self, x: Point) -> Result<Point> {
        fit_gradient(&self.field, &self.nodes.within(self.mesh(), x), x)
    }
}

/// Uniform bucket grid of mesh vertices with cell size equal to the search radius.
#[derive(Clone, Debug)]
struct NodeGrid {
    lo: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
}

impl NodeGrid {
    fn new(mesh: &Mesh, cell: f64) -> Self {
        let (mut lo, mut hi) =
            (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for v in &mesh.vertices {
            lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        let nx = ((hi.x - lo.x) / cell).floor() as usize + 1;
        let ny = ((hi.y - lo.y) / cell).floor() as usize + 1;
        let mut buckets = vec![Vec::new(); nx * ny];
        for (i, v) in mesh.vertices.iter().enumerate() {
            let (cx, cy) = (((v.x - lo.x) / cell) as usize, ((v.y - lo.y) / cell) as usize);
            buckets[cy.min(ny - 1) * nx + cx.min(nx - 1)].push(i as u32);
        }
        Self { lo, cell, nx, ny, buckets }
    }

    /// Vertices within one cell size of `x`, in increasing index order.
    fn within(&self, mesh: &Mesh, x: Point) -> Vec<usize> {
        let span = |t: f64, n: usize| {
            let c = (t / self.cell).floor();
            let lo = (c - 1.0).max(0.0) as usize;
            let hi = ((c + 1.0).max(-1.0) as isize).min(n as isize - 1);
            (lo, hi)
        };
        let (x0, x1) = span(x.x - self.lo.x, self.nx);
        let (y0, y1) = span(x.y - self.lo.y, self.ny);
        let mut out = Vec::new();
        for cy in y0 as isize..=y1 {
            for cx in x0 as isize..=x1 {
                for &v in &self.buckets[cy as usize * self.nx + cx as usize] {
                    if mesh.vertices[v as usize].dist(x) <= self.cell {
                        out.push(v as usize);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Barycenters of the triangles farther than `collar` from `∂Σ`, with their triangle index.
pub fn interior_barycenters(mesh: &Mesh, collar: f64) -> Vec<(usize, Point)> {
    (0..mesh.n_triangles())
        .map(|t| (t, mesh.barycenter(t)))
        .filter(|&(_, b)| mesh.spec.dist_to_boundary(b) > collar)
        .collect()
}

/// Distance from `x` to the boundary of a closed polygon.
pub fn dist_to_polygon(poly: &[Point], x: Point) -> f64 {
    let n = poly.len();
    (0..n).map(|i| sector_geometry::point::dist_to_segment(x, poly[i], poly[(i + 1) % n])).fold(f64::INFINITY, f64::min)
}

/// Parameter interval `[t₀, t₁]` of `{p + t d} ∩ Σ̄` for a unit direction `d`, from the two
/// wedge half-planes at `V` and the unit disk about `O`.
pub fn chord(spec: &SectorSpec, p: Point, d: Point) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    // Half-planes c₀ + c₁t ≥ 0.
    for (c0, c1) in
        [(spec.lower_dir().cross(p), spec.lower_dir().cross(d)), (p.cross(spec.upper_dir()), d.cross(spec.upper_dir()))]
    {
        if c1.abs() < 1e-15 {
            if c0 < 0.0 {
                return None;
            }
        } else if c1 > 0.0 {
            lo = lo.max(-c0 / c1);
        } else {
            hi = hi.min(-c0 / c1);
        }
    }
    let q = p - spec.center();
    let b = q.dot(d);
    let disc = b * b - (q.norm2() - 1.0);
    if disc <= 0.0 {
        return None;
    }
    let s = disc.sqrt();
    lo = lo.max(-b - s);
    hi = hi.min(-b + s);
    (hi > lo).then_some((lo, hi))
}

/// `n` equally spaced points of the open chord `T ∩ Σ` through `p` with direction `d`.
pub fn chord_points(spec: &SectorSpec, p: Point, d: Point, n: usize) -> Vec<Point> {
    match chord(spec, p, d) {
        Some((lo, hi)) => (0..n).map(|k| p + d * (lo + (hi - lo) * (k as f64 + 0.5) / n as f64)).collect(),
        None => Vec::new(),
    }
}

/// Gradient at `p` from a least-squares quadratic fit to the nodal values within `LS_RADIUS·h`;
/// usable on the boundary, where piecewise-linear gradients are one-sided.
pub fn ls_gradient(field: &ScalarField, p: Point) -> Result<Point> {
    let mesh = field.mesh();
    let r = LS_RADIUS * mesh.h;
    let near: Vec<usize> = (0..mesh.n_vertices()).filter(|&v| mesh.vertices[v].dist(p) <= r).collect();
    fit_gradient(field, &near, p)
}

fn fit_gradient(field: &ScalarField, near: &[usize], p: Point) -> Result<Point> {
    let mesh = field.mesh();
    let r = LS_RADIUS * mesh.h;
    if near.len() < 10 {
        return Err(AuditError::DegenerateFit(format!("{} nodes within {r} of ({}, {})", near.len(), p.x, p.y)));
    }
    // Coordinates scaled to the unit disk for conditioning.
    let basis = |v: usize| {
        let d = (mesh.vertices[v] - p) * (1.0 / r);
        [1.0, d.x, d.y, d.x * d.x, d.x * d.y, d.y * d.y]
    };
    let a = Mat::from_fn(near.len(), 6, |i, j| basis(near[i])[j]);
    let b = Mat::from_fn(near.len(), 1, |i, _| field.values()[near[i]]);
    let c = a.qr().solve_lstsq(&b);
    let g = Point::new(c[(1, 0)] / r, c[(2, 0)] / r);
    if !g.is_finite() {
        return Err(AuditError::DegenerateFit("non-finite gradient".into()));
    }
    Ok(g)
}
