use crate::audit::{chord_points, dist_to_polygon, ls_gradient, Audit, LINE_SAMPLES};
use crate::error::{AuditError, Result};
use crate::report::{AuditRow, CheckId};
use sector_fem::ScalarField;
use sector_geometry::{lambda_c, moving_domain, theta_a, theta_b, MovingLine, PieceTag, Point, SectorSpec};
use serde::{Deserialize, Serialize};

/// Which Neumann side a line or point check refers to: `T_{λ,ϑ}` and `Γ_N⁻`, or `T̂_{λ,ϑ}` and `Γ_N⁺`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

fn line_for(spec: &SectorSpec, lambda: f64, theta: f64, side: Side) -> MovingLine {
    match side {
        Side::Lower => MovingLine::new(spec, lambda, theta),
        Side::Upper => MovingLine::mirrored(spec, lambda, theta),
    }
}

/// `w^{λ,ϑ}(x) = u(x) − u(x^{λ,ϑ})`.
pub fn difference_w(field: &ScalarField, lambda: f64, theta: f64, x: Point) -> Result<f64> {
    let spec = field.mesh().spec;
    let xr = MovingLine::new(&spec, lambda, theta).reflect(x);
    if !spec.contains_closed(xr) {
        return Err(AuditError::ReflectionOutside { x: xr.x, y: xr.y });
    }
    let slack = field.mesh().h;
    Ok(field.evaluate_near(x, slack)? - field.evaluate_near(xr, slack)?)
}

/// Samples `w^{λ,ϑ}` at the barycenters of `D_{λ,ϑ,ϑ₁}` farther than `2h` from `∂D`; passes when
/// `max w ≤ tol`. `theta1` defaults to `max{2ϑ − π, 0}`.
pub fn check_w_negative(audit: &Audit, lambda: f64, theta: f64, theta1: Option<f64>) -> Result<AuditRow> {
    let spec = audit.spec();
    let dom = moving_domain(&spec, lambda, theta, theta1)?;
    let tol = audit.tolerance();
    let id = (Some(lambda), Some(theta), Some(dom.theta1));
    if dom.is_empty() {
        return Ok(AuditRow::new(CheckId::WNegative, audit.angles(), id, 0, None, tol).with_note("empty domain"));
    }
    let mesh = audit.mesh();
    let line = dom.line();
    let mut worst: Option<f64> = None;
    let mut n = 0;
    for t in 0..mesh.n_triangles() {
        let b = mesh.barycenter(t);
        if !dom.contains(b) || dist_to_polygon(&dom.polygon, b) <= audit.collar() {
            continue;
        }
        let w = audit.value(b)? - audit.value(line.reflect(b))?;
        worst = Some(worst.map_or(w, |m: f64| m.max(w)));
        n += 1;
    }
    let row = AuditRow::new(CheckId::WNegative, audit.angles(), id, n, worst, tol);
    Ok(if n == 0 { row.with_note("no samples beyond the collar") } else { row })
}

/// Samples `∇u·n` on `T_{λ,ϑ} ∩ Σ` (`Side::Lower`, the normal `(sin(ϑ−β/2), −cos(ϑ−β/2))`) or
/// on `T̂_{λ,ϑ} ∩ Σ` (`Side::Upper`, the normal `(sin(ϑ−β/2), cos(ϑ−β/2))`) away from a `2h`
/// collar, through the recovered gradient [`Audit::gradient`]. With `with_pivot` the Neumann
/// endpoint `P_λ` (or its mirror) is added when `0 < λ < l_N`.
pub fn directional_sign(audit: &Audit, lambda: f64, theta: f64, side: Side, with_pivot: bool) -> Result<AuditRow> {
    let spec = audit.spec();
    let line = line_for(&spec, lambda, theta, side);
    let pts = chord_points(&spec, line.pivot(), line.direction(), LINE_SAMPLES);
    if pts.is_empty() {
        return Err(AuditError::Empty("moving line ∩ Σ"));
    }
    let n = line.normal();
    let mut values = Vec::new();
    for x in pts.into_iter().filter(|&x| spec.dist_to_boundary(x) > audit.collar()) {
        values.push(audit.gradient(x)?.dot(n));
    }
    let mut note = String::new();
    if with_pivot && lambda > 0.0 && lambda < spec.l_n() {
        values.push(audit.gradient(line.pivot())?.dot(n));
        note.push_str("includes Neumann endpoint");
    }
    let id = match side {
        Side::Lower => CheckId::DirectionalLower,
        Side::Upper => CheckId::DirectionalUpper,
    };
    let worst = values.iter().copied().reduce(f64::max);
    Ok(AuditRow::new(id, audit.angles(), (Some(lambda), Some(theta), None), values.len(), worst, audit.tolerance())
        .with_note(note))
}

/// The tangential derivative along the Neumann side at `P_λ`: `u_{x₁} cos(β/2) − u_{x₂} sin(β/2)`
/// on `Γ_N⁻`, or `u_{x₁} cos(β/2) + u_{x₂} sin(β/2)` at the mirror point on `Γ_N⁺`, from the
/// least-squares gradient.
pub fn neumann_tangential_value(field: &ScalarField, lambda: f64, side: Side) -> Result<f64> {
    let spec = field.mesh().spec;
    if !(lambda > 0.0 && lambda < spec.l_n()) {
        return Err(AuditError::OutOfRegime(format!("lambda = {lambda} outside (0, l_N = {})", spec.l_n())));
    }
    let dir = match side {
        Side::Lower => spec.lower_dir(),
        Side::Upper => spec.upper_dir(),
    };
    Ok(ls_gradient(field, dir * lambda)?.dot(dir))
}

/// Row for [`neumann_tangential_value`]; passes when the value is at most the tolerance.
pub fn neumann_tangential(audit: &Audit, lambda: f64, side: Side) -> Result<AuditRow> {
    let v = neumann_tangential_value(audit.field(), lambda, side)?;
    let id = match side {
        Side::Lower => CheckId::NeumannTangentialLower,
        Side::Upper => CheckId::NeumannTangentialUpper,
    };
    Ok(AuditRow::new(id, audit.angles(), (Some(lambda), None, None), 1, Some(v), audit.tolerance()))
}

/// Rotation function `(x₁ − p₁)u_{x₂} − (x₂ − p₂)u_{x₁}` about `pivot`.
pub fn rotation_v(field: &ScalarField, pivot: Point, x: Point) -> Result<f64> {
    let g = field.gradient_near(x, field.mesh().h)?;
    Ok((x - pivot).cross(g))
}

/// Log-log fit of `max_σ |v_λ(P_λ + r e_{σ−β/2})|` against `r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HwFit {
    pub slope: f64,
    pub radii: Vec<f64>,
    pub maxima: Vec<f64>,
}

/// Angular samples on each half circle of [`hw_exponent`].
pub const HW_ANGLES: usize = 64;

/// Default radii for [`hw_exponent`]: six geometric steps from `3h` to `0.9` of the admissible
/// bound `min{λ, l_N − λ}/2`.
pub fn default_hw_radii(spec: &SectorSpec, lambda: f64, h: f64) -> Vec<f64> {
    let top = 0.9 * lambda.min(spec.l_n() - lambda) / 2.0;
    let bottom = 3.0 * h;
    if !(top > bottom) {
        return Vec::new();
    }
    (0..6).map(|k| bottom * (top / bottom).powf(k as f64 / 5.0)).collect()
}

/// Leading exponent `l̂` of the rotation function at the Neumann point `P_λ`.
pub fn hw_exponent(field: &ScalarField, lambda: f64, radii: &[f64]) -> Result<HwFit> {
    let spec = field.mesh().spec;
    let h = field.mesh().h;
    if !(lambda > 0.0 && lambda < spec.l_n()) {
        return Err(AuditError::OutOfRegime(format!("lambda = {lambda} outside (0, l_N = {})", spec.l_n())));
    }
    let bound = lambda.min(spec.l_n() - lambda) / 2.0;
    if radii.len() < 2 || radii.iter().any(|&r| !(r > 2.0 * h && r < bound)) {
        return Err(AuditError::DegenerateFit(format!("need at least two radii in (2h, {bound}), got {radii:?}")));
    }
    let p = MovingLine::new(&spec, lambda, 0.0).pivot();
    let mut maxima = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut m = 0.0f64;
        for k in 0..HW_ANGLES {
            let sigma = std::f64::consts::PI * (k as f64 + 0.5) / HW_ANGLES as f64;
            let x = p + Point::unit(sigma - spec.beta() / 2.0) * r;
            if spec.contains(x) {
                m = m.max(rotation_v(field, p, x)?.abs());
            }
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(AuditError::DegenerateFit(format!("rotation function vanishes at radius {r}")));
        }
        maxima.push(m);
    }
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = maxima.iter().map(|m| m.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(AuditError::DegenerateFit("radii are all equal".into()));
    }
    Ok(HwFit { slope: sxy / sxx, radii: radii.to_vec(), maxima })
}

/// Accepted distance of `l̂` from one.
pub const HW_TOLERANCE: f64 = 0.2;

/// Row for [`hw_exponent`] with [`default_hw_radii`]: violation `|l̂ − 1|` against
/// [`HW_TOLERANCE`].
pub fn hw_exponent_row(audit: &Audit, lambda: f64) -> Result<AuditRow> {
    let radii = default_hw_radii(&audit.spec(), lambda, audit.h());
    let fit = hw_exponent(audit.field(), lambda, &radii)?;
    Ok(AuditRow::new(
        CheckId::HwExponent,
        audit.angles(),
        (Some(lambda), None, None),
        fit.radii.len(),
        Some((fit.slope - 1.0).abs()),
        HW_TOLERANCE,
    )
    .with_note(format!("l = {:.6}", fit.slope)))
}

/// The directional predicate on `T_{λ,ϑ}` restricted to the right cap `Σ_{Λ,ϑ_A(Λ)}`, the
/// part of `Σ` on the positive side of `T_{Λ,ϑ_A(Λ)}`, together with the same predicate on the
/// whole line. The full-line row is marked expected-fail: for `ϑ_A(λ) < ϑ < ϑ_B(λ)` and
/// `λ < λ_C` the predicate fails in a layer along `Γ_D`, so the full line is sampled up to the
/// ends of the chord while the sub-cap keeps the `2h` collar.
pub fn subcap_directional_sign(
    audit: &Audit,
    cap_lambda: f64,
    lambda: f64,
    theta: f64,
) -> Result<(AuditRow, AuditRow)> {
    let spec = audit.spec();
    let lc = lambda_c(&spec);
    if !(cap_lambda > 0.0 && cap_lambda < lambda && lambda < lc) {
        return Err(AuditError::OutOfRegime(format!("need 0 < Λ = {cap_lambda} < λ = {lambda} < λ_C = {lc}")));
    }
    let (ta, tb) = (theta_a(&spec, lambda), theta_b(&spec, lambda));
    if !(theta > ta && theta < tb) {
        return Err(AuditError::OutOfRegime(format!("theta = {theta} outside (ϑ_A, ϑ_B) = ({ta}, {tb})")));
    }
    let cap = MovingLine::new(&spec, cap_lambda, theta_a(&spec, cap_lambda));
    let line = MovingLine::new(&spec, lambda, theta);
    let n = line.normal();
    let mut sub = Vec::new();
    let mut full = Vec::new();
    for x in chord_points(&spec, line.pivot(), line.direction(), LINE_SAMPLES) {
        let v = audit.gradient(x)?.dot(n);
        full.push(v);
        if cap.signed_dist(x) > 0.0 && spec.dist_to_boundary(x) > audit.collar() {
            sub.push(v);
        }
    }
    let id = (Some(lambda), Some(theta), None);
    let tol = audit.tolerance();
    let mut sub_row = AuditRow::new(
        CheckId::SubcapDirectional,
        audit.angles(),
        id,
        sub.len(),
        sub.iter().copied().reduce(f64::max),
        tol,
    )
    .with_note(format!("cap Lambda = {cap_lambda:.6}"));
    if sub.is_empty() {
        sub_row = sub_row.with_note("empty sub-cap");
    }
    let full_row = AuditRow::new(
        CheckId::FullLineDirectional,
        audit.angles(),
        id,
        full.len(),
        full.iter().copied().reduce(f64::max),
        tol,
    )
    .expected_fail();
    Ok((sub_row, full_row))
}

/// For `0 < λ < λ♯` and `x̄` on `Γ²ᴬ` of `D_{λ,β/2}`, with `ȳ` the reflection of `x̄` across
/// `T_{λ,β/2}` and `z̄` the reflection of `ȳ` across `T_{λ,ϑ_A(λ)}`, samples
/// `max{u(x̄) − u(z̄), u(z̄) − u(ȳ)}` at `n` points.
pub fn chained_comparison(audit: &Audit, lambda: f64, n: usize) -> Result<AuditRow> {
    let spec = audit.spec();
    let sharp = sector_geometry::derive_constants(&spec).lambda_sharp;
    if !(lambda > 0.0 && lambda < sharp) {
        return Err(AuditError::OutOfRegime(format!("lambda = {lambda} outside (0, λ♯ = {sharp})")));
    }
    let beta = spec.beta();
    let dom = moving_domain(&spec, lambda, beta / 2.0, None)?;
    let first = MovingLine::new(&spec, lambda, beta / 2.0);
    let second = MovingLine::new(&spec, lambda, theta_a(&spec, lambda));
    let pieces = dom.pieces_with(PieceTag::Gamma2A);
    let total: f64 = pieces.iter().map(|p| p.start.dist(p.end)).sum();
    let mut worst: Option<f64> = None;
    let mut count = 0;
    if total > 0.0 {
        for k in 0..n {
            let mut s = total * (k as f64 + 0.5) / n as f64;
            let Some(piece) = pieces.iter().find(|p| {
                let len = p.start.dist(p.end);
                if s <= len {
                    true
                } else {
                    s -= len;
                    false
                }
            }) else {
                continue;
            };
            let x = piece.start.lerp(piece.end, s / piece.start.dist(piece.end));
            let y = first.reflect(x);
            let z = second.reflect(y);
            if !(spec.contains_closed(y) && spec.contains_closed(z)) {
                continue;
            }
            let (ux, uy, uz) = (audit.value(x)?, audit.value(y)?, audit.value(z)?);
            let v = (ux - uz).max(uz - uy);
            worst = Some(worst.map_or(v, |m: f64| m.max(v)));
            count += 1;
        }
    }
    Ok(AuditRow::new(
        CheckId::ChainedComparison,
        audit.angles(),
        (Some(lambda), Some(beta / 2.0), None),
        count,
        worst,
        audit.tolerance(),
    ))
}
