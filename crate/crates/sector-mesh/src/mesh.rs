use crate::error::{MeshError, Result};
use crate::locate::Locator;
use sector_geometry::{Point, SectorSpec};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::OnceLock;

/// Boundary condition carried by a boundary edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundaryTag {
    DirichletArc,
    NeumannLower,
    NeumannUpper,
}

impl BoundaryTag {
    /// The tag of the mirror image under `x₂ ↦ −x₂`.
    pub fn mirrored(self) -> Self {
        match self {
            BoundaryTag::DirichletArc => BoundaryTag::DirichletArc,
            BoundaryTag::NeumannLower => BoundaryTag::NeumannUpper,
            BoundaryTag::NeumannUpper => BoundaryTag::NeumannLower,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundaryEdge {
    pub v0: usize,
    pub v1: usize,
    pub tag: BoundaryTag,
}

/// A triangulation of the sector. Triangles are counter-clockwise.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Mesh {
    pub spec: SectorSpec,
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    pub h: f64,
    pub symmetric: bool,
    #[serde(skip)]
    pub(crate) locator: OnceLock<Locator>,
}

impl PartialEq for Mesh {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
            && self.vertices == other.vertices
            && self.triangles == other.triangles
            && self.boundary_edges == other.boundary_edges
            && self.h == other.h
            && self.symmetric == other.symmetric
    }
}

/// Summary statistics of a mesh.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshQuality {
    pub min_angle_deg: f64,
    pub max_angle_deg: f64,
    pub h_max: f64,
    pub h_min: f64,
    pub n_vertices: usize,
    pub n_triangles: usize,
    pub n_boundary_edges: usize,
    pub area: f64,
}

impl Mesh {
    pub(crate) fn from_parts(
        spec: SectorSpec,
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        boundary_edges: Vec<BoundaryEdge>,
        h: f64,
        symmetric: bool,
    ) -> Self {
        Self { spec, vertices, triangles, boundary_edges, h, symmetric, locator: OnceLock::new() }
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        0.5 * (b - a).cross(c - a)
    }

    pub fn barycenter(&self, t: usize) -> Point {
        let [a, b, c] = self.triangle_points(t);
        Point::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
    }

    pub fn area(&self) -> f64 {
        (0..self.n_triangles()).map(|t| self.triangle_area(t)).sum()
    }

    /// Vertices lying on at least one edge with `tag`.
    pub fn tagged_vertices(&self, tag: BoundaryTag) -> Vec<usize> {
        let mut v: Vec<usize> =
            self.boundary_edges.iter().filter(|e| e.tag == tag).flat_map(|e| [e.v0, e.v1]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Per-vertex flag: `true` on the Dirichlet arc (including `P±`).
    pub fn dirichlet_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n_vertices()];
        for v in self.tagged_vertices(BoundaryTag::DirichletArc) {
            mask[v] = true;
        }
        mask
    }

    /// Per-vertex flag: `true` on any boundary edge.
    pub fn boundary_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n_vertices()];
        for e in &self.boundary_edges {
            mask[e.v0] = true;
            mask[e.v1] = true;
        }
        mask
    }

    /// Longest edge length.
    pub fn h_max(&self) -> f64 {
        self.edge_lengths().fold(0.0, f64::max)
    }

    fn edge_lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.triangles.iter().flat_map(move |&[a, b, c]| {
            let p = |i: usize| self.vertices[i];
            [p(a).dist(p(b)), p(b).dist(p(c)), p(c).dist(p(a))]
        })
    }

    pub fn quality(&self) -> MeshQuality {
        let (mut amin, mut amax) = (f64::INFINITY, 0.0f64);
        for t in 0..self.n_triangles() {
            let pts = self.triangle_points(t);
            for k in 0..3 {
                let (p, q, r) = (pts[k], pts[(k + 1) % 3], pts[(k + 2) % 3]);
                let (u, w) = (q - p, r - p);
                let ang = u.cross(w).atan2(u.dot(w)).abs().to_degrees();
                amin = amin.min(ang);
                amax = amax.max(ang);
            }
        }
        let (hmin, hmax) = self.edge_lengths().fold((f64::INFINITY, 0.0f64), |(lo, hi), l| (lo.min(l), hi.max(l)));
        MeshQuality {
            min_angle_deg: amin,
            max_angle_deg: amax,
            h_max: hmax,
            h_min: hmin,
            n_vertices: self.n_vertices(),
            n_triangles: self.n_triangles(),
            n_boundary_edges: self.boundary_edges.len(),
            area: self.area(),
        }
    }

    /// Undirected edge → adjacent triangles.
    pub fn edge_map(&self) -> HashMap<(usize, usize), Vec<usize>> {
        let mut map: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                map.entry((a.min(b), a.max(b))).or_default().push(t);
            }
        }
        map
    }

    /// Checks orientation, conformity, tag geometry and the tag partition of the boundary.
    pub fn validate(&self) -> Result<()> {
        let tol = 1e-12;
        for (t, _) in self.triangles.iter().enumerate() {
            if self.triangle_area(t) <= 0.0 {
                return Err(MeshError::Invariant(format!("triangle {t} is not counter-clockwise")));
            }
        }
        let edges = self.edge_map();
        let mut boundary: HashMap<(usize, usize), BoundaryTag> = HashMap::new();
        for e in &self.boundary_edges {
            if boundary.insert((e.v0.min(e.v1), e.v0.max(e.v1)), e.tag).is_some() {
                return Err(MeshError::Invariant("boundary edge listed twice".into()));
            }
        }
        for (key, tris) in &edges {
            match tris.len() {
                1 if boundary.contains_key(key) => {}
                1 => return Err(MeshError::Invariant(format!("untagged boundary edge {key:?}"))),
                2 if !boundary.contains_key(key) => {}
                n => return Err(MeshError::Invariant(format!("edge {key:?} has {n} triangles"))),
            }
        }
        if boundary.len() != edges.values().filter(|t| t.len() == 1).count() {
            return Err(MeshError::Invariant("tagged edge is not a mesh boundary edge".into()));
        }
        let o = self.spec.center();
        let (lower, upper) = (self.spec.lower_dir(), self.spec.upper_dir());
        for e in &self.boundary_edges {
            for v in [e.v0, e.v1] {
                let x = self.vertices[v];
                let ok = match e.tag {
                    BoundaryTag::DirichletArc => (x.dist(o) - 1.0).abs() <= tol,
                    BoundaryTag::NeumannLower => lower.cross(x).abs() <= tol && x.dot(lower) >= -tol,
                    BoundaryTag::NeumannUpper => upper.cross(x).abs() <= tol && x.dot(upper) >= -tol,
                };
                if !ok {
                    return Err(MeshError::Invariant(format!("vertex {v} off its {:?} boundary", e.tag)));
                }
            }
        }
        Ok(())
    }

    /// The vertex permutation realizing `x₂ ↦ −x₂`, when it is a tag-swapping automorphism.
    pub fn mirror_permutation(&self) -> Option<Vec<usize>> {
        let key = |p: Point| ((p.x * 1e9).round() as i64, (p.y * 1e9).round() as i64);
        let index: HashMap<(i64, i64), usize> = self.vertices.iter().enumerate().map(|(i, &p)| (key(p), i)).collect();
        let perm: Option<Vec<usize>> = self.vertices.iter().map(|&p| index.get(&key(p.mirror_x2())).copied()).collect();
        let perm = perm?;
        let mut tris: Vec<[usize; 3]> = self.triangles.iter().map(|&t| canonical_triangle(t)).collect();
        tris.sort_unstable();
        let mut mapped: Vec<[usize; 3]> =
            self.triangles.iter().map(|&[a, b, c]| canonical_triangle([perm[a], perm[c], perm[b]])).collect();
        mapped.sort_unstable();
        if tris != mapped {
            return None;
        }
        let mut edges: Vec<(usize, usize, BoundaryTag)> =
            self.boundary_edges.iter().map(|e| (e.v0.min(e.v1), e.v0.max(e.v1), e.tag)).collect();
        edges.sort_unstable_by_key(|e| (e.0, e.1));
        let mut medges: Vec<(usize, usize, BoundaryTag)> = self
            .boundary_edges
            .iter()
            .map(|e| {
                let (a, b) = (perm[e.v0], perm[e.v1]);
                (a.min(b), a.max(b), e.tag.mirrored())
            })
            .collect();
        medges.sort_unstable_by_key(|e| (e.0, e.1));
        (edges == medges).then_some(perm)
    }

    /// Uniform quadrisection; new arc nodes are projected onto the circle.
    pub fn refine(&self) -> Mesh {
        let mut vertices = self.vertices.clone();
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let arc: HashMap<(usize, usize), BoundaryTag> =
            self.boundary_edges.iter().map(|e| ((e.v0.min(e.v1), e.v0.max(e.v1)), e.tag)).collect();
        let o = self.spec.center();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Point>| -> usize {
            let k = (a.min(b), a.max(b));
            if let Some(&m) = mid.get(&k) {
                return m;
            }
            // Average in index order so mirrored edges produce mirrored points bit for bit.
            let (p, q) = (vertices[k.0], vertices[k.1]);
            let mut x = Point::new(0.5 * (p.x + q.x), 0.5 * (p.y + q.y));
            if arc.get(&k) == Some(&BoundaryTag::DirichletArc) {
                let d = x - o;
                x = o + d * (1.0 / d.norm());
            } else if matches!(arc.get(&k), Some(BoundaryTag::NeumannLower | BoundaryTag::NeumannUpper)) {
                let dir =
                    if arc[&k] == BoundaryTag::NeumannLower { self.spec.lower_dir() } else { self.spec.upper_dir() };
                x = dir * x.dot(dir);
            }
            vertices.push(x);
            mid.insert(k, vertices.len() - 1);
            vertices.len() - 1
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        let boundary_edges = self
            .boundary_edges
            .iter()
            .flat_map(|e| {
                let m = mid[&(e.v0.min(e.v1), e.v0.max(e.v1))];
                [BoundaryEdge { v0: e.v0, v1: m, tag: e.tag }, BoundaryEdge { v0: m, v1: e.v1, tag: e.tag }]
            })
            .collect();
        Mesh::from_parts(self.spec, vertices, triangles, boundary_edges, 0.5 * self.h, self.symmetric)
    }
}

/// Rotation of a triangle so the smallest index comes first, keeping orientation.
fn canonical_triangle(t: [usize; 3]) -> [usize; 3] {
    let k = (0..3).min_by_key(|&i| t[i]).unwrap_or(0);
    [t[k], t[(k + 1) % 3], t[(k + 2) % 3]]
}
