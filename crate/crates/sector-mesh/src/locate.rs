use crate::error::{MeshError, Result};
use crate::mesh::Mesh;
use sector_geometry::Point;
use serde::{Deserialize, Serialize};

/// Barycentric tolerance for membership of a point in a closed triangle.
const BARY_TOL: f64 = 1e-12;

/// A triangle index with the barycentric coordinates of a point relative to its vertices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Location {
    pub triangle: usize,
    pub bary: [f64; 3],
}

/// Uniform bucket grid over the bounding box; each cell lists triangles whose boxes overlap it.
#[derive(Clone, Debug)]
pub(crate) struct Locator {
    lo: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
}

impl Locator {
    fn build(mesh: &Mesh) -> Self {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &mesh.vertices {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let n_cells = (mesh.n_triangles() as f64 / 2.0).max(1.0);
        let (w, h) = ((hi.x - lo.x).max(1e-12), (hi.y - lo.y).max(1e-12));
        let cell = (w * h / n_cells).sqrt();
        let nx = ((w / cell).ceil() as usize).max(1);
        let ny = ((h / cell).ceil() as usize).max(1);
        let mut buckets = vec![Vec::new(); nx * ny];
        for t in 0..mesh.n_triangles() {
            let pts = mesh.triangle_points(t);
            let (mut tlo, mut thi) = (pts[0], pts[0]);
            for p in &pts[1..] {
                tlo = Point::new(tlo.x.min(p.x), tlo.y.min(p.y));
                thi = Point::new(thi.x.max(p.x), thi.y.max(p.y));
            }
            let (i0, j0) = cell_of(lo, cell, nx, ny, tlo);
            let (i1, j1) = cell_of(lo, cell, nx, ny, thi);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    buckets[j * nx + i].push(t as u32);
                }
            }
        }
        Self { lo, cell, nx, ny, buckets }
    }

    fn candidates(&self, x: Point) -> &[u32] {
        let (i, j) = cell_of(self.lo, self.cell, self.nx, self.ny, x);
        &self.buckets[j * self.nx + i]
    }

    fn cells_within(&self, x: Point, r: f64) -> impl Iterator<Item = &Vec<u32>> + '_ {
        let (i0, j0) = cell_of(self.lo, self.cell, self.nx, self.ny, Point::new(x.x - r, x.y - r));
        let (i1, j1) = cell_of(self.lo, self.cell, self.nx, self.ny, Point::new(x.x + r, x.y + r));
        (j0..=j1).flat_map(move |j| (i0..=i1).map(move |i| &self.buckets[j * self.nx + i]))
    }
}

fn cell_of(lo: Point, cell: f64, nx: usize, ny: usize, x: Point) -> (usize, usize) {
    let i = ((x.x - lo.x) / cell).floor().clamp(0.0, (nx - 1) as f64) as usize;
    let j = ((x.y - lo.y) / cell).floor().clamp(0.0, (ny - 1) as f64) as usize;
    (i, j)
}

/// Barycentric coordinates of `x` in triangle `[a, b, c]`.
pub(crate) fn barycentric(pts: [Point; 3], x: Point) -> [f64; 3] {
    let [a, b, c] = pts;
    let det = (b - a).cross(c - a);
    let l1 = (b - x).cross(c - x) / det;
    let l2 = (c - x).cross(a - x) / det;
    [l1, l2, 1.0 - l1 - l2]
}

impl Mesh {
    fn locator(&self) -> &Locator {
        self.locator.get_or_init(|| Locator::build(self))
    }

    /// The triangle containing `x` (closed, within a barycentric tolerance).
    pub fn locate(&self, x: Point) -> Result<Location> {
        let mut best: Option<Location> = None;
        for &t in self.locator().candidates(x) {
            let bary = barycentric(self.triangle_points(t as usize), x);
            let m = bary.iter().copied().fold(f64::INFINITY, f64::min);
            if m >= -BARY_TOL {
                let loc = Location { triangle: t as usize, bary };
                // Prefer the triangle with the most interior coordinates on shared edges.
                if best.map_or(true, |b| b.bary.iter().copied().fold(f64::INFINITY, f64::min) < m) {
                    best = Some(loc);
                }
            }
        }
        best.ok_or(MeshError::PointOutside { x: x.x, y: x.y })
    }

    /// All triangles containing `x` within the barycentric tolerance.
    pub fn locate_all(&self, x: Point) -> Vec<Location> {
        self.locator()
            .candidates(x)
            .iter()
            .filter_map(|&t| {
                let bary = barycentric(self.triangle_points(t as usize), x);
                (bary.iter().copied().fold(f64::INFINITY, f64::min) >= -BARY_TOL)
                    .then_some(Location { triangle: t as usize, bary })
            })
            .collect()
    }

    /// [`Mesh::locate`], falling back to the nearest triangle within `max_dist` with
    /// extrapolated barycentric coordinates; covers the gap between chords and the arc.
    pub fn locate_or_nearest(&self, x: Point, max_dist: f64) -> Result<Location> {
        if let Ok(loc) = self.locate(x) {
            return Ok(loc);
        }
        let mut best: Option<(f64, usize)> = None;
        for bucket in self.locator().cells_within(x, max_dist) {
            for &t in bucket {
                let pts = self.triangle_points(t as usize);
                let d = (0..3)
                    .map(|k| sector_geometry::point::dist_to_segment(x, pts[k], pts[(k + 1) % 3]))
                    .fold(f64::INFINITY, f64::min);
                if d <= max_dist && best.map_or(true, |(bd, bt)| d < bd || (d == bd && (t as usize) < bt)) {
                    best = Some((d, t as usize));
                }
            }
        }
        best.map(|(_, t)| Location { triangle: t, bary: barycentric(self.triangle_points(t), x) })
            .ok_or(MeshError::PointOutside { x: x.x, y: x.y })
    }
}
