use crate::audit::{dist_to_polygon, Audit};
use crate::error::Result;
use crate::report::{AuditRow, CheckId};
use sector_fem::ScalarField;
use sector_geometry::{DoubleMovingDomain, DoublePieceTag, Point, SectorSpec};

/// The even extension of a field across `Γ_N⁻` to the doubled sector `Σ̃ = Σ ∪ Γ_N⁻ ∪ Σ_*`.
#[derive(Clone, Debug)]
pub struct ExtendedField {
    field: ScalarField,
}

pub fn even_extension(field: &ScalarField) -> ExtendedField {
    ExtendedField { field: field.clone() }
}

impl ExtendedField {
    pub fn spec(&self) -> SectorSpec {
        self.field.mesh().spec
    }

    /// `u(x)` on the `Σ` side of the `Γ_N⁻` line, `u(x_*)` with `x_*` the mirror image otherwise.
    pub fn evaluate(&self, x: Point) -> Result<f64> {
        let spec = self.spec();
        let y = if spec.lower_dir().cross(x) >= 0.0 { x } else { spec.mirror_lower(x) };
        Ok(self.field.evaluate_near(y, self.field.mesh().h)?)
    }
}

/// Samples `w^{λ,ϑ}` of the even extension over `D̃_{λ,ϑ}` at the mesh barycenters and their
/// mirror images farther than `2h` from `∂D̃`. Valid for `ϑ_B(λ) ≤ ϑ ≤ π/2`, `0 < λ ≤ l_⊥`.
pub fn check_double_negative(audit: &Audit, lambda: f64, theta: f64) -> Result<AuditRow> {
    let spec = audit.spec();
    let dom = DoubleMovingDomain::new(&spec, lambda, theta)?;
    let ext = even_extension(audit.field());
    let line = sector_geometry::MovingLine::new(&spec, lambda, theta);
    let mesh = audit.mesh();
    let mut worst: Option<f64> = None;
    let mut n = 0;
    for t in 0..mesh.n_triangles() {
        let b = mesh.barycenter(t);
        for x in [b, spec.mirror_lower(b)] {
            if !dom.contains(x) || dist_to_polygon(&dom.triangle, x) <= audit.collar() {
                continue;
            }
            let w = ext.evaluate(x)? - ext.evaluate(line.reflect(x))?;
            worst = Some(worst.map_or(w, |m: f64| m.max(w)));
            n += 1;
        }
    }
    let len = |tag| dom.pieces_with(tag).iter().map(|p| p.start.dist(p.end)).sum::<f64>();
    let note = format!(
        "piece lengths G0 {:.4} G1 {:.4} G2A {:.4} G2B {:.4}",
        len(DoublePieceTag::Gamma0),
        len(DoublePieceTag::Gamma1),
        len(DoublePieceTag::Gamma2A),
        len(DoublePieceTag::Gamma2B)
    );
    Ok(AuditRow::new(
        CheckId::DoubleNegative,
        audit.angles(),
        (Some(lambda), Some(theta), None),
        n,
        worst,
        audit.tolerance(),
    )
    .with_note(note))
}
