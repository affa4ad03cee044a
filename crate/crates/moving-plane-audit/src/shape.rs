use crate::audit::{interior_barycenters, Audit, TOL_FLOOR};
use crate::error::Result;
use crate::report::{AuditRow, CheckId};
use sector_fem::ScalarField;
use sector_geometry::Point;
use serde::{Deserialize, Serialize};

/// Lattice cells per axis of the symmetry sample set.
pub const SYMMETRY_LATTICE: usize = 200;
/// Fractional offsets of the lattice points inside their cells, chosen off the mesh's
/// symmetric structure.
const LATTICE_OFFSET: (f64, f64) = (0.37, 0.41);

/// Largest `|u(x₁, x₂) − u(x₁, −x₂)|` over the sample set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryDefect {
    pub value: f64,
    pub n_points: usize,
}

/// Fixed lattice points of `Σ` farther than `collar` from `∂Σ`. Depends only on the sector and
/// `collar`, so two meshes of the same sector are compared on the same points.
pub fn symmetry_samples(field: &ScalarField, collar: f64) -> Vec<Point> {
    let spec = field.mesh().spec;
    let x_hi = 1.0 - spec.a();
    let n = SYMMETRY_LATTICE;
    let mut pts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let x = Point::new(
                x_hi * (i as f64 + LATTICE_OFFSET.0) / n as f64,
                -1.0 + 2.0 * (j as f64 + LATTICE_OFFSET.1) / n as f64,
            );
            if spec.contains(x) && spec.dist_to_boundary(x) > collar {
                pts.push(x);
            }
        }
    }
    pts
}

/// Symmetry defect over [`symmetry_samples`].
pub fn symmetry_defect(field: &ScalarField, collar: f64) -> Result<SymmetryDefect> {
    let slack = field.mesh().h;
    let pts = symmetry_samples(field, collar);
    let mut value = 0.0f64;
    for &x in &pts {
        value = value.max((field.evaluate_near(x, slack)? - field.evaluate_near(x.mirror_x2(), slack)?).abs());
    }
    Ok(SymmetryDefect { value, n_points: pts.len() })
}

/// Observed order `log₂(coarse/fine)` of a quantity under one uniform refinement.
pub fn refinement_rate(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

/// Row of [`symmetry_defect`] with the audit collar and tolerance.
pub fn symmetry_row(audit: &Audit) -> Result<AuditRow> {
    let d = symmetry_defect(audit.field(), audit.collar())?;
    Ok(AuditRow::new(
        CheckId::SymmetryDefect,
        audit.angles(),
        (None, None, None),
        d.n_points,
        Some(d.value),
        audit.tolerance(),
    ))
}

/// Smallest accepted observed order of the symmetry defect under one refinement.
pub const SYMMETRY_MIN_RATE: f64 = 1.5;

/// Compares the symmetry defect of `coarse` with that of `fine`, a solution on a refinement of
/// the same sector, on the same lattice and the coarse collar. The row carries `−rate` against
/// the tolerance `−1.5`, so it passes when the defect decays at order at least 1.5. A fine
/// defect at the tolerance floor yields the plain [`CheckId::SymmetryDefect`] row of `fine`.
pub fn symmetry_rate_row(coarse: &Audit, fine: &ScalarField) -> Result<AuditRow> {
    let c = symmetry_defect(coarse.field(), coarse.collar())?;
    let f = symmetry_defect(fine, coarse.collar())?;
    if f.value <= TOL_FLOOR {
        return Ok(AuditRow::new(
            CheckId::SymmetryDefect,
            coarse.angles(),
            (None, None, None),
            f.n_points,
            Some(f.value),
            TOL_FLOOR,
        )
        .with_note("refined defect at the floor"));
    }
    let rate = refinement_rate(c.value, f.value);
    Ok(AuditRow::new(
        CheckId::SymmetryRate,
        coarse.angles(),
        (None, None, None),
        f.n_points,
        Some(-rate),
        -SYMMETRY_MIN_RATE,
    )
    .with_note(format!("defect {:.3e} at h = {}, {:.3e} at h = {}", c.value, coarse.h(), f.value, fine.mesh().h)))
}

fn barycenter_row(audit: &Audit, id: CheckId, q: impl Fn(Point, Point) -> f64) -> AuditRow {
    let field = audit.field();
    let pts = interior_barycenters(audit.mesh(), audit.collar());
    let worst = pts.iter().map(|&(t, b)| q(b, field.triangle_gradient(t))).reduce(f64::max);
    AuditRow::new(id, audit.angles(), (None, None, None), pts.len(), worst, audit.tolerance())
}

/// `max u_{x₁}` over barycenters farther than `2h` from `∂Σ`.
pub fn monotonicity_x1(audit: &Audit) -> AuditRow {
    barycenter_row(audit, CheckId::MonotoneX1, |_, g| g.x)
}

/// `max x₂ u_{x₂}` over barycenters farther than `2h` from `∂Σ`.
pub fn monotonicity_x2_half(audit: &Audit) -> AuditRow {
    barycenter_row(audit, CheckId::MonotoneX2Half, |b, g| b.y * g.y)
}
