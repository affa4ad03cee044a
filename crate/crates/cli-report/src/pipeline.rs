use crate::error::{internal, Result};
use moving_plane_audit::{
    audit_pair, audit_sweep, chained_comparison, check_double_negative, hw_exponent_row, is_asserted, monotonicity_x1,
    monotonicity_x2_half, symmetry_rate_row, symmetry_row, Audit, AuditReport, AuditRow, CheckId, ThetaPolicy,
};
use rayon::prelude::*;
use sector_fem::{solve_semilinear, FemSpace, NonlinearitySpec, ScalarField, SolveOptions, SolveReport};
use sector_geometry::{derive_constants, theta_b, SectorSpec};
use sector_mesh::{generate, Mesh, MeshOptions};
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

/// Solves the semilinear problem on `mesh` to Newton tolerance `tol`.
pub fn solve_on(mesh: Mesh, fspec: &NonlinearitySpec, tol: f64) -> Result<(ScalarField, SolveReport)> {
    let space = FemSpace::new(Arc::new(mesh));
    let opts = SolveOptions { tol, ..SolveOptions::default() };
    solve_semilinear(&space, fspec, &opts).map_err(internal)
}

/// Meshes `spec` and solves on it.
pub fn solve_sector(
    spec: &SectorSpec,
    mesh: MeshOptions,
    fspec: &NonlinearitySpec,
    tol: f64,
) -> Result<(ScalarField, SolveReport)> {
    solve_on(generate(spec, mesh).map_err(internal)?, fspec, tol)
}

/// The translation parameters audited when none are given: `{0.25, 0.5, 0.75}·l_N` and
/// `{0.5, 1, 1.5}·λ♯`, restricted to `(0, λ_max)`, sorted.
pub fn default_lambdas(spec: &SectorSpec) -> Vec<f64> {
    let k = derive_constants(spec);
    let mut out: Vec<f64> = [0.25, 0.5, 0.75]
        .iter()
        .map(|f| f * k.l_n)
        .chain([0.5, 1.0, 1.5].iter().map(|f| f * k.lambda_sharp))
        .filter(|&l| l > 0.0 && l < k.lambda_max)
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    out
}

/// What to audit on a field.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditPlan {
    /// Empty selects [`default_lambdas`].
    pub lambdas: Vec<f64>,
    /// Empty selects the admissible-set policy.
    pub thetas: Vec<f64>,
    pub policy: ThetaPolicy,
    pub kappa: f64,
}

fn skipped(audit: &Audit, id: CheckId, pair: (Option<f64>, Option<f64>), err: impl std::fmt::Display) -> AuditRow {
    let spec = audit.spec();
    AuditRow::new(id, (spec.alpha(), spec.beta()), (pair.0, pair.1, None), 0, None, audit.tolerance())
        .with_note(format!("skipped: {err}"))
}

/// Symmetry, monotonicity, Neumann-point, chained and doubled-domain rows of one field.
/// `fine` is a solution on the refinement of the field's mesh; on unsymmetric meshes it turns
/// the symmetry check into a refinement-rate check, and without it no symmetry row is produced.
pub fn global_rows(audit: &Audit, fine: Option<&ScalarField>) -> Vec<AuditRow> {
    let spec = audit.spec();
    let k = derive_constants(&spec);
    let mut rows = Vec::new();
    let symmetry =
        if audit.mesh().symmetric { Some(symmetry_row(audit)) } else { fine.map(|f| symmetry_rate_row(audit, f)) };
    if let Some(r) = symmetry {
        rows.push(r.unwrap_or_else(|e| skipped(audit, CheckId::SymmetryDefect, (None, None), e)));
    }
    rows.push(monotonicity_x1(audit));
    rows.push(monotonicity_x2_half(audit));
    let half = k.l_n / 2.0;
    rows.push(
        hw_exponent_row(audit, half).unwrap_or_else(|e| skipped(audit, CheckId::HwExponent, (Some(half), None), e)),
    );
    if k.lambda_sharp > 0.0 {
        let l = k.lambda_sharp / 2.0;
        rows.push(
            chained_comparison(audit, l, 64)
                .unwrap_or_else(|e| skipped(audit, CheckId::ChainedComparison, (Some(l), None), e)),
        );
    }
    if k.l_perp > 0.0 {
        let l = k.l_perp / 2.0;
        let tb = theta_b(&spec, l);
        if tb < FRAC_PI_2 {
            let t = 0.5 * (tb + FRAC_PI_2);
            rows.push(
                check_double_negative(audit, l, t)
                    .unwrap_or_else(|e| skipped(audit, CheckId::DoubleNegative, (Some(l), Some(t)), e)),
            );
        }
    }
    rows.into_iter().map(|r| if is_asserted(&spec, 0.0, None) { r } else { r.exploratory() }).collect()
}

/// [`global_rows`] followed by the moving-plane rows of every `(λ, ϑ)` of the plan.
pub fn full_audit(field: ScalarField, fine: Option<&ScalarField>, plan: &AuditPlan) -> AuditReport {
    let audit = Audit::new(field, plan.kappa);
    let spec = audit.spec();
    let lambdas = if plan.lambdas.is_empty() { default_lambdas(&spec) } else { plan.lambdas.clone() };
    let mut report = AuditReport::new(plan.kappa);
    report.rows = global_rows(&audit, fine);
    if plan.thetas.is_empty() {
        report.rows.extend(audit_sweep(&audit, &lambdas, plan.policy).rows);
    } else {
        let pairs: Vec<(f64, f64)> = lambdas.iter().flat_map(|&l| plan.thetas.iter().map(move |&t| (l, t))).collect();
        let blocks: Vec<Vec<AuditRow>> = pairs.par_iter().map(|&(l, t)| audit_pair(&audit, l, t)).collect();
        report.rows.extend(blocks.into_iter().flatten());
    }
    report
}

/// Solves on `spec`, and on the refined mesh when `refine` holds and the mesh is unsymmetric,
/// then runs [`full_audit`].
pub fn solve_and_audit(
    spec: &SectorSpec,
    mesh: MeshOptions,
    fspec: &NonlinearitySpec,
    tol: f64,
    refine: bool,
    plan: &AuditPlan,
) -> Result<AuditReport> {
    let coarse_mesh = generate(spec, mesh).map_err(internal)?;
    let fine = if refine && !mesh.symmetric { Some(solve_on(coarse_mesh.refine(), fspec, tol)?.0) } else { None };
    let (field, _) = solve_on(coarse_mesh, fspec, tol)?;
    Ok(full_audit(field, fine.as_ref(), plan))
}
