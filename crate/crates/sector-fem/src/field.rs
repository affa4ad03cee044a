use crate::error::{FemError, Result};
use crate::nonlinearity::NonlinearitySpec;
use crate::solve::SolveReport;
use sector_geometry::Point;
use sector_mesh::{Location, Mesh};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// A continuous piecewise-linear function on a mesh, one value per vertex.
#[derive(Clone, Debug)]
pub struct ScalarField {
    mesh: Arc<Mesh>,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(mesh: Arc<Mesh>, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.n_vertices() {
            return Err(FemError::InvalidInput(format!("{} values for {} vertices", values.len(), mesh.n_vertices())));
        }
        Ok(Self { mesh, values })
    }

    /// Nodal interpolant of `g`.
    pub fn interpolate(mesh: Arc<Mesh>, g: impl Fn(Point) -> f64) -> Self {
        let values = mesh.vertices.iter().map(|&p| g(p)).collect();
        Self { mesh, values }
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Constant gradient of the field on triangle `t`.
    pub fn triangle_gradient(&self, t: usize) -> Point {
        let [i, j, k] = self.mesh.triangles[t];
        let p = self.mesh.triangle_points(t);
        let twice = (p[1] - p[0]).cross(p[2] - p[0]);
        let (u0, u1, u2) = (self.values[i], self.values[j], self.values[k]);
        let gx = u0 * (p[1].y - p[2].y) + u1 * (p[2].y - p[0].y) + u2 * (p[0].y - p[1].y);
        let gy = u0 * (p[2].x - p[1].x) + u1 * (p[0].x - p[2].x) + u2 * (p[1].x - p[0].x);
        Point::new(gx / twice, gy / twice)
    }

    fn eval_at(&self, loc: Location, x: Point) -> f64 {
        let [i, j, k] = self.mesh.triangles[loc.triangle];
        if let Some(&v) = [i, j, k].iter().find(|&&v| self.mesh.vertices[v] == x) {
            return self.values[v];
        }
        loc.bary[0] * self.values[i] + loc.bary[1] * self.values[j] + loc.bary[2] * self.values[k]
    }

    /// Barycentric interpolation at `x`, exact at vertices; errors outside the meshed region.
    pub fn evaluate(&self, x: Point) -> Result<f64> {
        Ok(self.eval_at(self.mesh.locate(x)?, x))
    }

    /// [`ScalarField::evaluate`] with linear extrapolation from the nearest triangle within
    /// `slack`, for points of the sector lying between the arc and its chords.
    pub fn evaluate_near(&self, x: Point, slack: f64) -> Result<f64> {
        Ok(self.eval_at(self.mesh.locate_or_nearest(x, slack)?, x))
    }

    /// Gradient at `x`: the containing triangle's gradient, averaged over all triangles that
    /// contain `x` when it lies on an edge or vertex.
    pub fn gradient(&self, x: Point) -> Result<Point> {
        let locs = self.mesh.locate_all(x);
        if locs.is_empty() {
            return Err(sector_mesh::MeshError::PointOutside { x: x.x, y: x.y }.into());
        }
        let sum = locs.iter().fold(Point::new(0.0, 0.0), |acc, l| acc + self.triangle_gradient(l.triangle));
        Ok(sum * (1.0 / locs.len() as f64))
    }

    /// [`ScalarField::gradient`], falling back to the nearest triangle within `slack`.
    pub fn gradient_near(&self, x: Point, slack: f64) -> Result<Point> {
        match self.gradient(x) {
            Ok(g) => Ok(g),
            Err(_) => Ok(self.triangle_gradient(self.mesh.locate_or_nearest(x, slack)?.triangle)),
        }
    }

    /// Minimum over vertices off the Dirichlet arc.
    pub fn min_interior(&self) -> f64 {
        let mask = self.mesh.dirichlet_mask();
        self.values.iter().zip(&mask).filter(|(_, &d)| !d).map(|(v, _)| *v).fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `‖u − g‖_{L²}` over the mesh by a degree-4 quadrature on each triangle.
    pub fn l2_error(&self, g: impl Fn(Point) -> f64) -> f64 {
        let mut total = 0.0;
        for t in 0..self.mesh.n_triangles() {
            let p = self.mesh.triangle_points(t);
            let [i, j, k] = self.mesh.triangles[t];
            let u = [self.values[i], self.values[j], self.values[k]];
            let area = self.mesh.triangle_area(t);
            for (b, w) in DUNAVANT4 {
                let x = p[0] * b[0] + p[1] * b[1] + p[2] * b[2];
                let uh = b[0] * u[0] + b[1] * u[1] + b[2] * u[2];
                total += w * area * (uh - g(x)).powi(2);
            }
        }
        total.sqrt()
    }

    /// `‖u‖_{L²}` over the mesh.
    pub fn l2_norm(&self) -> f64 {
        self.l2_error(|_| 0.0)
    }

    /// Serializable record with the mesh embedded.
    pub fn to_record(&self, fspec: Option<NonlinearitySpec>, solve_report: Option<SolveReport>) -> FieldRecord {
        FieldRecord { mesh: (*self.mesh).clone(), values: self.values.clone(), fspec, solve_report }
    }
}

/// Six-point symmetric rule of degree 4 on a triangle; weights sum to one.
const DUNAVANT4: [([f64; 3], f64); 6] = {
    const A1: f64 = 0.445948490915965;
    const B1: f64 = 1.0 - 2.0 * A1;
    const W1: f64 = 0.223381589678011;
    const A2: f64 = 0.091576213509771;
    const B2: f64 = 1.0 - 2.0 * A2;
    const W2: f64 = 0.109951743655322;
    [
        ([A1, A1, B1], W1),
        ([A1, B1, A1], W1),
        ([B1, A1, A1], W1),
        ([A2, A2, B2], W2),
        ([A2, B2, A2], W2),
        ([B2, A2, A2], W2),
    ]
};

/// JSON form of a field: embedded mesh, nodal values, and optionally the nonlinearity and
/// solver report that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub mesh: Mesh,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fspec: Option<NonlinearitySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solve_report: Option<SolveReport>,
}

impl FieldRecord {
    pub fn into_field(self) -> Result<ScalarField> {
        self.mesh.validate()?;
        ScalarField::new(Arc::new(self.mesh), self.values)
    }
}
