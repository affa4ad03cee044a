use crate::audit::Audit;
use crate::checks::{check_w_negative, directional_sign, neumann_tangential, Side};
use crate::error::Result;
use crate::report::{AuditReport, AuditRow, CheckId};
use rayon::prelude::*;
use sector_geometry::{critical_angles, theta_b, SectorSpec};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Largest `β` for which the audited symmetry statements are asserted.
pub const ASSERTED_BETA_MAX: f64 = 2.0 * PI / 3.0;

/// Angles per `λ`: the members of `{ϑᴬ, ϑ_B, β, π/2, (π+β)/2}` lying in `J_λ`, plus `fill`
/// midpoints of equal-measure cells of `J_λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaPolicy {
    pub fill: usize,
}

impl Default for ThetaPolicy {
    fn default() -> Self {
        Self { fill: 5 }
    }
}

/// Sorted, deduplicated angle grid of [`ThetaPolicy`] for `λ > 0`.
pub fn theta_grid(spec: &SectorSpec, lambda: f64, policy: ThetaPolicy) -> Result<Vec<f64>> {
    let j = critical_angles(spec, lambda)?;
    let b = spec.beta();
    let mut grid: Vec<f64> = [j.theta_a_cap, j.theta_b, b, FRAC_PI_2, (PI + b) / 2.0]
        .into_iter()
        .filter(|&t| t > 0.0 && t < PI && j.contains(t))
        .chain(j.sample(policy.fill))
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    Ok(grid)
}

/// Whether the moving-plane predicates at `(λ, ϑ)` are asserted: `β ≤ 2π/3` and either
/// `ϑ ≤ ϑ_B(λ)`, `β ≤ π/3`, or the spherical sector.
pub fn is_asserted(spec: &SectorSpec, lambda: f64, theta: Option<f64>) -> bool {
    let b = spec.beta();
    if b > ASSERTED_BETA_MAX + 1e-12 {
        return false;
    }
    match theta {
        None => true,
        Some(t) => spec.is_spherical() || b <= PI / 3.0 + 1e-12 || t <= theta_b(spec, lambda) + 1e-12,
    }
}

fn skipped(audit: &Audit, id: CheckId, lambda: f64, theta: Option<f64>, err: impl std::fmt::Display) -> AuditRow {
    AuditRow::new(id, audit.angles(), (Some(lambda), theta, None), 0, None, audit.tolerance())
        .with_note(format!("skipped: {err}"))
}

fn rows_for_lambda(audit: &Audit, lambda: f64, policy: ThetaPolicy) -> Vec<AuditRow> {
    let spec = audit.spec();
    let mut rows = Vec::new();
    if lambda > 0.0 && lambda < spec.l_n() {
        for (side, id) in
            [(Side::Lower, CheckId::NeumannTangentialLower), (Side::Upper, CheckId::NeumannTangentialUpper)]
        {
            rows.push(neumann_tangential(audit, lambda, side).unwrap_or_else(|e| skipped(audit, id, lambda, None, e)));
        }
    }
    let grid = match theta_grid(&spec, lambda, policy) {
        Ok(g) => g,
        Err(e) => {
            rows.push(skipped(audit, CheckId::WNegative, lambda, None, e));
            return mark_regime(&spec, lambda, rows);
        }
    };
    for theta in grid {
        rows.extend(rows_at(audit, lambda, theta));
    }
    mark_regime(&spec, lambda, rows)
}

fn mark_regime(spec: &SectorSpec, lambda: f64, rows: Vec<AuditRow>) -> Vec<AuditRow> {
    rows.into_iter().map(|r| if is_asserted(spec, lambda, r.theta) { r } else { r.exploratory() }).collect()
}

fn rows_at(audit: &Audit, lambda: f64, theta: f64) -> Vec<AuditRow> {
    let t = Some(theta);
    vec![
        check_w_negative(audit, lambda, theta, None)
            .unwrap_or_else(|e| skipped(audit, CheckId::WNegative, lambda, t, e)),
        directional_sign(audit, lambda, theta, Side::Lower, true)
            .unwrap_or_else(|e| skipped(audit, CheckId::DirectionalLower, lambda, t, e)),
        directional_sign(audit, lambda, theta, Side::Upper, true)
            .unwrap_or_else(|e| skipped(audit, CheckId::DirectionalUpper, lambda, t, e)),
    ]
}

/// The moving-plane rows of a single `(λ, ϑ)`: `w` negativity and both directional signs,
/// marked exploratory outside the asserted regime.
pub fn audit_pair(audit: &Audit, lambda: f64, theta: f64) -> Vec<AuditRow> {
    mark_regime(&audit.spec(), lambda, rows_at(audit, lambda, theta))
}

/// Runs the moving-plane checks for every `λ` of the grid and every angle of the policy.
/// Rows are ordered by `λ` (grid order), then `ϑ`, then check; failures to evaluate a check
/// become vacuous rows noting the reason.
pub fn audit_sweep(audit: &Audit, lambdas: &[f64], policy: ThetaPolicy) -> AuditReport {
    let blocks: Vec<Vec<AuditRow>> = lambdas.par_iter().map(|&l| rows_for_lambda(audit, l, policy)).collect();
    AuditReport { kappa: audit.kappa(), rows: blocks.into_iter().flatten().collect() }
}
