use crate::error::{MeshError, Result};
use crate::mesh::{BoundaryEdge, BoundaryTag, Mesh};
use sector_geometry::{Point, SectorSpec};
use serde::{Deserialize, Serialize};
use spade::{AngleLimit, ConstrainedDelaunayTriangulation, Point2, RefinementParameters, Triangulation};
use std::collections::HashSet;

/// Default ratio between the bulk edge length and the edge length at `V` and `P±`.
pub const DEFAULT_GRADING: f64 = 4.0;

/// Minimum angle requested from Delaunay refinement.
const REFINE_ANGLE_DEG: f64 = 28.0;

/// Guaranteed minimum triangle angle.
pub const MIN_ANGLE_DEG: f64 = 20.0;

/// Samples per boundary curve when integrating the spacing function.
const SPACING_SAMPLES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshOptions {
    pub h: f64,
    pub symmetric: bool,
    pub grading: f64,
}

impl MeshOptions {
    pub fn new(h: f64) -> Self {
        Self { h, symmetric: false, grading: DEFAULT_GRADING }
    }

    pub fn symmetric(mut self, symmetric: bool) -> Self {
        self.symmetric = symmetric;
        self
    }

    pub fn grading(mut self, grading: f64) -> Self {
        self.grading = grading;
        self
    }
}

/// A parametrized boundary curve `u ∈ [0, 1] ↦ point`.
struct Curve<'a> {
    at: Box<dyn Fn(f64) -> Point + 'a>,
    start: Point,
    tag: Option<BoundaryTag>,
}

/// Target edge length: `h/g` at a corner, growing linearly to `h` at distance `r_g`.
fn spacing(x: Point, corners: &[Point], h: f64, g: f64, r_g: f64) -> f64 {
    let d = corners.iter().map(|c| c.dist(x)).fold(f64::INFINITY, f64::min);
    h * (1.0 / g + (1.0 - 1.0 / g) * d / r_g).clamp(1.0 / g, 1.0)
}

/// Nodes along a curve with spacing following [`spacing`]; both endpoints included.
fn place_nodes(curve: &Curve, corners: &[Point], h: f64, g: f64, r_g: f64) -> Vec<Point> {
    let m = SPACING_SAMPLES;
    let pts: Vec<Point> = (0..=m).map(|k| (curve.at)(k as f64 / m as f64)).collect();
    let mut cum = vec![0.0; m + 1];
    for k in 0..m {
        let ds = pts[k].dist(pts[k + 1]);
        let f0 = 1.0 / spacing(pts[k], corners, h, g, r_g);
        let f1 = 1.0 / spacing(pts[k + 1], corners, h, g, r_g);
        cum[k + 1] = cum[k] + 0.5 * (f0 + f1) * ds;
    }
    let n = (cum[m].round() as usize).max(1);
    let mut out = Vec::with_capacity(n + 1);
    out.push(pts[0]);
    let mut k = 0;
    for j in 1..n {
        let target = cum[m] * j as f64 / n as f64;
        while cum[k + 1] < target {
            k += 1;
        }
        let u = (k as f64 + (target - cum[k]) / (cum[k + 1] - cum[k])) / m as f64;
        out.push((curve.at)(u));
    }
    out.push(pts[m]);
    out
}

/// Triangulates `Σ`, or its upper half followed by mirroring when `symmetric`.
pub fn generate(spec: &SectorSpec, opts: MeshOptions) -> Result<Mesh> {
    let MeshOptions { h, symmetric, grading } = opts;
    if !(h > 0.0 && h <= 0.2) {
        return Err(MeshError::InvalidSize(h));
    }
    if !(grading >= 1.0) {
        return Err(MeshError::InvalidGrading(grading));
    }
    let (p_plus, p_minus) = (spec.p_plus(), spec.p_minus());
    let o = spec.center();
    let half = spec.alpha() / 2.0;
    let corners = [Point::ORIGIN, p_plus, p_minus];
    let r_g = (spec.l_n() / 3.0).min(0.25);

    let arc = |from: f64, to: f64| -> Box<dyn Fn(f64) -> Point> {
        Box::new(move |u: f64| {
            let t = from + (to - from) * u;
            Point::new(o.x + t.cos(), t.sin())
        })
    };
    let segment = |a: Point, b: Point, snap_lower: bool| -> Box<dyn Fn(f64) -> Point> {
        Box::new(move |u: f64| {
            let x = a.lerp(b, u);
            if snap_lower {
                Point::new(x.x, 0.0)
            } else {
                x
            }
        })
    };
    let axis_end = Point::new(o.x + 1.0, 0.0);
    let curves: Vec<Curve> = if symmetric {
        vec![
            Curve { at: segment(Point::ORIGIN, axis_end, true), start: Point::ORIGIN, tag: None },
            Curve { at: arc(0.0, half), start: axis_end, tag: Some(BoundaryTag::DirichletArc) },
            Curve { at: segment(p_plus, Point::ORIGIN, false), start: p_plus, tag: Some(BoundaryTag::NeumannUpper) },
        ]
    } else {
        vec![
            Curve {
                at: segment(Point::ORIGIN, p_minus, false),
                start: Point::ORIGIN,
                tag: Some(BoundaryTag::NeumannLower),
            },
            Curve { at: arc(-half, half), start: p_minus, tag: Some(BoundaryTag::DirichletArc) },
            Curve { at: segment(p_plus, Point::ORIGIN, false), start: p_plus, tag: Some(BoundaryTag::NeumannUpper) },
        ]
    };

    // Closed loop of boundary nodes; curve endpoints are shared with their neighbours.
    let mut loop_pts: Vec<Point> = Vec::new();
    let mut loop_tags: Vec<Option<BoundaryTag>> = Vec::new();
    for c in &curves {
        let nodes = place_nodes(c, &corners, h, grading, r_g);
        // The first node is replaced by the exact corner or axis point.
        loop_pts.push(c.start);
        loop_tags.push(c.tag);
        for p in &nodes[1..nodes.len() - 1] {
            loop_pts.push(*p);
            loop_tags.push(c.tag);
        }
    }
    let n_loop = loop_pts.len();
    let edges: Vec<[usize; 2]> = (0..n_loop).map(|i| [i, (i + 1) % n_loop]).collect();

    let verts: Vec<Point2<f64>> = loop_pts.iter().map(|p| Point2::new(p.x, p.y)).collect();
    let mut cdt = ConstrainedDelaunayTriangulation::<Point2<f64>>::bulk_load_cdt(verts, edges)
        .map_err(|e| MeshError::Triangulation(format!("{e:?}")))?;
    if cdt.num_vertices() != n_loop {
        return Err(MeshError::Triangulation("duplicate boundary nodes".into()));
    }
    let max_area = 3f64.sqrt() / 4.0 * h * h;
    let budget = (40.0 * spec.area() / max_area) as usize + 10 * n_loop;
    let params = RefinementParameters::<f64>::new()
        .exclude_outer_faces(true)
        .keep_constraint_edges()
        .with_angle_limit(AngleLimit::from_deg(REFINE_ANGLE_DEG))
        .with_max_allowed_area(max_area)
        .with_max_additional_vertices(budget);
    let result = cdt.refine(params);
    if !result.refinement_complete {
        return Err(MeshError::Triangulation("refinement vertex budget exhausted".into()));
    }
    let excluded: HashSet<usize> = result.excluded_faces.iter().map(|f| f.index()).collect();

    let vertices: Vec<Point> = cdt
        .vertices()
        .map(|v| {
            let p = v.position();
            Point::new(p.x, p.y)
        })
        .collect();
    let mut triangles: Vec<[usize; 3]> = Vec::new();
    for f in cdt.inner_faces() {
        if excluded.contains(&f.fix().index()) {
            continue;
        }
        let vs = f.vertices();
        let mut t = [vs[0].fix().index(), vs[1].fix().index(), vs[2].fix().index()];
        let (a, b, c) = (vertices[t[0]], vertices[t[1]], vertices[t[2]]);
        if (b - a).cross(c - a) < 0.0 {
            t.swap(1, 2);
        }
        triangles.push(t);
    }
    let mut boundary: Vec<BoundaryEdge> =
        (0..n_loop).filter_map(|i| loop_tags[i].map(|tag| BoundaryEdge { v0: i, v1: (i + 1) % n_loop, tag })).collect();

    let mesh = if symmetric {
        mirror_upper_half(spec, vertices, triangles, &mut boundary, h)
    } else {
        Mesh::from_parts(*spec, vertices, triangles, boundary, h, false)
    };
    mesh.validate()?;
    let min_angle = mesh.quality().min_angle_deg;
    if min_angle < MIN_ANGLE_DEG {
        return Err(MeshError::Quality(min_angle));
    }
    Ok(mesh)
}

/// Reflects an upper-half mesh across `x₂ = 0`, sharing the axis nodes.
fn mirror_upper_half(
    spec: &SectorSpec,
    mut vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary: &mut Vec<BoundaryEdge>,
    h: f64,
) -> Mesh {
    let n = vertices.len();
    let mut image = vec![0usize; n];
    for i in 0..n {
        if vertices[i].y == 0.0 {
            image[i] = i;
        } else {
            vertices.push(vertices[i].mirror_x2());
            image[i] = vertices.len() - 1;
        }
    }
    let mut all = triangles.clone();
    all.extend(triangles.iter().map(|&[a, b, c]| [image[a], image[c], image[b]]));
    let mirrored: Vec<BoundaryEdge> =
        boundary.iter().map(|e| BoundaryEdge { v0: image[e.v1], v1: image[e.v0], tag: e.tag.mirrored() }).collect();
    boundary.extend(mirrored);
    Mesh::from_parts(*spec, vertices, all, std::mem::take(boundary), h, true)
}
