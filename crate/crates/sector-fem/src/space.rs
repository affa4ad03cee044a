use crate::error::{FemError, Result};
use faer::prelude::*;
use faer::sparse::linalg::solvers::Lu;
use faer::sparse::{SparseColMat, Triplet};
use rayon::prelude::*;
use sector_geometry::Point;
use sector_mesh::{BoundaryTag, Mesh};
use std::sync::Arc;

/// Per-triangle data of the P1 basis: vertex indices, area, local stiffness.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Element {
    pub nodes: [usize; 3],
    pub area: f64,
    pub stiffness: [[f64; 3]; 3],
}

impl Element {
    fn new(mesh: &Mesh, t: usize) -> Self {
        let nodes = mesh.triangles[t];
        let p = mesh.triangle_points(t);
        let twice = (p[1] - p[0]).cross(p[2] - p[0]);
        let mut grads = [Point::new(0.0, 0.0); 3];
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            grads[i] = Point::new(p[j].y - p[k].y, p[k].x - p[j].x) * (1.0 / twice);
        }
        let area = 0.5 * twice;
        let mut stiffness = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                stiffness[i][j] = area * grads[i].dot(grads[j]);
            }
        }
        Self { nodes, area, stiffness }
    }
}

/// A scalar coefficient given as a constant, per-vertex values, or per-triangle values.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Constant(f64),
    Nodal(Vec<f64>),
    Element(Vec<f64>),
}

impl Coefficient {
    /// Nodal sampling of `g`.
    pub fn from_fn(mesh: &Mesh, g: impl Fn(Point) -> f64) -> Self {
        Self::Nodal(mesh.vertices.iter().map(|&p| g(p)).collect())
    }

    pub(crate) fn check(&self, mesh: &Mesh) -> Result<()> {
        match self {
            Self::Nodal(v) if v.len() != mesh.n_vertices() => {
                Err(FemError::InvalidInput(format!("{} nodal values for {} vertices", v.len(), mesh.n_vertices())))
            }
            Self::Element(v) if v.len() != mesh.n_triangles() => {
                Err(FemError::InvalidInput(format!("{} element values for {} triangles", v.len(), mesh.n_triangles())))
            }
            _ => Ok(()),
        }
    }

    /// Value at the midpoint of the edge `(a, b)` of triangle `t`.
    pub(crate) fn at_edge_midpoint(&self, t: usize, a: usize, b: usize) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Nodal(v) => 0.5 * (v[a] + v[b]),
            Self::Element(v) => v[t],
        }
    }

    pub(crate) fn at_vertex(&self, v: usize) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Nodal(vals) => vals[v],
            Self::Element(_) => unreachable!("boundary data is vertex based"),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Self::Constant(c) => *c == 0.0,
            Self::Nodal(v) | Self::Element(v) => v.iter().all(|x| *x == 0.0),
        }
    }
}

/// Degree-of-freedom numbering and element data of the P1 space on a mesh, with Dirichlet
/// vertices eliminated.
#[derive(Clone, Debug)]
pub struct FemSpace {
    mesh: Arc<Mesh>,
    pub(crate) elements: Vec<Element>,
    /// Free index of each vertex, `None` on the Dirichlet arc.
    pub(crate) dof: Vec<Option<usize>>,
    /// Vertex of each free index.
    pub(crate) free: Vec<usize>,
}

impl FemSpace {
    pub fn new(mesh: Arc<Mesh>) -> Self {
        let elements: Vec<Element> = (0..mesh.n_triangles()).into_par_iter().map(|t| Element::new(&mesh, t)).collect();
        let mask = mesh.dirichlet_mask();
        let mut dof = vec![None; mesh.n_vertices()];
        let mut free = Vec::new();
        for (v, &d) in mask.iter().enumerate() {
            if !d {
                dof[v] = Some(free.len());
                free.push(v);
            }
        }
        Self { mesh, elements, dof, free }
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn n_free(&self) -> usize {
        self.free.len()
    }

    pub fn is_dirichlet(&self, v: usize) -> bool {
        self.dof[v].is_none()
    }

    /// Nodal vector from free values, with `dirichlet(v)` on eliminated vertices.
    pub(crate) fn expand(&self, free_vals: &[f64], dirichlet: impl Fn(usize) -> f64) -> Vec<f64> {
        self.dof
            .iter()
            .enumerate()
            .map(|(v, d)| match d {
                Some(i) => free_vals[*i],
                None => dirichlet(v),
            })
            .collect()
    }

    pub(crate) fn restrict(&self, nodal: &[f64]) -> Vec<f64> {
        self.free.iter().map(|&v| nodal[v]).collect()
    }

    /// Free-free block of `∫∇u·∇φ − ∫ w u φ`, where `w` is evaluated by the edge-midpoint rule.
    /// Entries coupling free rows to Dirichlet columns are returned separately.
    pub(crate) fn operator(
        &self,
        weight: Option<&Coefficient>,
    ) -> (SparseColMat<usize, f64>, Vec<Triplet<usize, usize, f64>>) {
        match weight {
            None => self.scatter(&self.elements.iter().map(|e| e.stiffness).collect::<Vec<_>>()),
            Some(w) => self.operator_with(|t, k| {
                let n = self.elements[t].nodes;
                w.at_edge_midpoint(t, n[k], n[(k + 1) % 3])
            }),
        }
    }

    /// [`FemSpace::operator`] with the weight given per element edge `k` (nodes `k`, `k + 1`).
    pub(crate) fn operator_with(
        &self,
        weight: impl Fn(usize, usize) -> f64 + Sync,
    ) -> (SparseColMat<usize, f64>, Vec<Triplet<usize, usize, f64>>) {
        let locals: Vec<[[f64; 3]; 3]> = self
            .elements
            .par_iter()
            .enumerate()
            .map(|(t, e)| {
                let mut k = e.stiffness;
                let m = midpoint_mass(e, |q| weight(t, q));
                for i in 0..3 {
                    for j in 0..3 {
                        k[i][j] -= m[i][j];
                    }
                }
                k
            })
            .collect();
        self.scatter(&locals)
    }

    /// Free-free block of the consistent mass matrix.
    pub(crate) fn mass(&self) -> SparseColMat<usize, f64> {
        let locals: Vec<[[f64; 3]; 3]> = self.elements.par_iter().map(|e| consistent_mass(e.area)).collect();
        self.scatter(&locals).0
    }

    fn scatter(&self, locals: &[[[f64; 3]; 3]]) -> (SparseColMat<usize, f64>, Vec<Triplet<usize, usize, f64>>) {
        let mut inner = Vec::with_capacity(9 * locals.len());
        let mut coupling = Vec::new();
        for (e, k) in self.elements.iter().zip(locals) {
            for i in 0..3 {
                let Some(r) = self.dof[e.nodes[i]] else { continue };
                for j in 0..3 {
                    match self.dof[e.nodes[j]] {
                        Some(c) => inner.push(Triplet::new(r, c, k[i][j])),
                        None => coupling.push(Triplet::new(r, e.nodes[j], k[i][j])),
                    }
                }
            }
        }
        let n = self.n_free();
        let mat = SparseColMat::try_new_from_triplets(n, n, &inner).expect("triplet indices are in range");
        (mat, coupling)
    }

    /// Free entries of `∫ g(x) φ_i`, where `g` is supplied per edge midpoint of each triangle.
    pub(crate) fn load(&self, g: impl Fn(usize, usize, usize) -> f64 + Sync) -> Vec<f64> {
        let locals: Vec<[f64; 3]> = self
            .elements
            .par_iter()
            .enumerate()
            .map(|(t, e)| {
                let mut b = [0.0; 3];
                for k in 0..3 {
                    let (a, c) = (e.nodes[k], e.nodes[(k + 1) % 3]);
                    let w = e.area / 3.0 * g(t, a, c) * 0.5;
                    b[k] += w;
                    b[(k + 1) % 3] += w;
                }
                b
            })
            .collect();
        let mut out = vec![0.0; self.n_free()];
        for (e, b) in self.elements.iter().zip(&locals) {
            for i in 0..3 {
                if let Some(r) = self.dof[e.nodes[i]] {
                    out[r] += b[i];
                }
            }
        }
        out
    }

    /// Free entries of `∫_{Γ_N} q φ_i ds` by two-point Gauss on Neumann edges.
    pub(crate) fn neumann_load(&self, q: &Coefficient) -> Vec<f64> {
        let mut out = vec![0.0; self.n_free()];
        if q.is_zero() {
            return out;
        }
        let g = 0.5 / 3f64.sqrt();
        for e in &self.mesh.boundary_edges {
            if e.tag == BoundaryTag::DirichletArc {
                continue;
            }
            let len = self.mesh.vertices[e.v0].dist(self.mesh.vertices[e.v1]);
            let (q0, q1) = (q.at_vertex(e.v0), q.at_vertex(e.v1));
            for s in [0.5 - g, 0.5 + g] {
                let qs = (1.0 - s) * q0 + s * q1;
                if let Some(r) = self.dof[e.v0] {
                    out[r] += 0.5 * len * qs * (1.0 - s);
                }
                if let Some(r) = self.dof[e.v1] {
                    out[r] += 0.5 * len * qs * s;
                }
            }
        }
        out
    }
}

/// `∫ w φ_i φ_j` on one element by the edge-midpoint rule, exact for quadratic integrands.
pub(crate) fn midpoint_mass(e: &Element, w: impl Fn(usize) -> f64) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    for k in 0..3 {
        let (i, j) = (k, (k + 1) % 3);
        let wq = e.area / 3.0 * w(k) * 0.25;
        m[i][i] += wq;
        m[j][j] += wq;
        m[i][j] += wq;
        m[j][i] += wq;
    }
    m
}

fn consistent_mass(area: f64) -> [[f64; 3]; 3] {
    let d = area / 6.0;
    let o = area / 12.0;
    [[d, o, o], [o, d, o], [o, o, d]]
}

/// Sparse LU factorization of a free-free system.
pub(crate) struct Factor(Lu<usize, f64>);

impl Factor {
    pub fn new(mat: &SparseColMat<usize, f64>) -> Result<Self> {
        mat.sp_lu().map(Factor).map_err(|e| FemError::Singular(format!("{e:?}")))
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let b = Col::<f64>::from_fn(rhs.len(), |i| rhs[i]);
        let x = self.0.solve(&b);
        let out: Vec<f64> = (0..rhs.len()).map(|i| x[i]).collect();
        if out.iter().all(|v| v.is_finite()) {
            Ok(out)
        } else {
            Err(FemError::Singular("non-finite solution".into()))
        }
    }
}

pub(crate) fn matvec(mat: &SparseColMat<usize, f64>, x: &[f64]) -> Vec<f64> {
    let xc = Col::<f64>::from_fn(x.len(), |i| x[i]);
    let y = mat * &xc;
    (0..mat.nrows()).map(|i| y[i]).collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
