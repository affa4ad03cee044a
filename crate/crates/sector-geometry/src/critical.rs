//! Critical angles, the admissible set `J_λ`, the companion lengths `λ̂`, `λ̌`, `λ_*`, the
//! function `ζ`, and the continuation quantities `ϑ_λ`, `l_*`, `ω̄_λ`, `ι`, `ȷ`.

use crate::error::{GeometryError, Result};
use crate::point::Point;
use crate::roots::bisect;
use crate::spec::SectorSpec;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Threshold below which a sine denominator counts as a removable singularity.
const SINGULAR_EPS: f64 = 1e-14;

/// `arccot(t) = π/2 − arctan(t)`, valued in `(0, π)`.
pub fn arccot(t: f64) -> f64 {
    FRAC_PI_2 - t.atan()
}

/// `ϑ_A(λ)`: the angle at which `T_{λ,ϑ}` passes through `O`; `π` for the spherical sector.
pub fn theta_a(spec: &SectorSpec, lambda: f64) -> f64 {
    let a = spec.a().abs();
    if a == 0.0 {
        return PI;
    }
    let b2 = spec.beta() / 2.0;
    arccot((a * b2.cos() - lambda) / (a * b2.sin()))
}

/// `ϑ_B(λ)`: the angle at which `T_{λ,ϑ}` passes through `P₊`.
pub fn theta_b(spec: &SectorSpec, lambda: f64) -> f64 {
    let l_n = spec.l_n();
    let b = spec.beta();
    arccot((l_n * b.cos() - lambda) / (l_n * b.sin()))
}

/// Inverse of `λ ↦ ϑ_A(λ)` (unclamped; may be negative for `ϑ < β/2`).
pub fn theta_a_inverse(spec: &SectorSpec, theta: f64) -> f64 {
    let a = spec.a().abs();
    let b2 = spec.beta() / 2.0;
    a * (b2.cos() - b2.sin() / theta.tan())
}

/// Inverse of `λ ↦ ϑ_B(λ)` (unclamped).
pub fn theta_b_inverse(spec: &SectorSpec, theta: f64) -> f64 {
    let b = spec.beta();
    spec.l_n() * (b.cos() - b.sin() / theta.tan())
}

/// `λ_C = |a|·sin(α/2)/sin((α+β)/2)`; zero for the spherical sector.
pub fn lambda_c(spec: &SectorSpec) -> f64 {
    spec.a().abs() * (spec.alpha() / 2.0).sin() / ((spec.alpha() + spec.beta()) / 2.0).sin()
}

/// A closed angle interval, open at zero when `lo == 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleInterval {
    pub lo: f64,
    pub hi: f64,
}

impl AngleInterval {
    pub fn contains(&self, theta: f64) -> bool {
        let lower_ok = if self.lo == 0.0 { theta > 0.0 } else { theta >= self.lo };
        lower_ok && theta <= self.hi
    }

    pub fn len(&self) -> f64 {
        (self.hi - self.lo).max(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }
}

/// The admissible set `J_λ` together with the critical angles that define it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleSet {
    pub lambda: f64,
    pub intervals: Vec<AngleInterval>,
    pub theta_a: f64,
    pub theta_b: f64,
    /// `ϑᴬ = min{ϑ_A, ϑ_B, (π+β)/2}`.
    pub theta_a_cap: f64,
    /// `ϑᴮ = min{ϑ_B, (π+β)/2}`.
    pub theta_b_cap: f64,
}

impl AdmissibleSet {
    /// Membership with closed interval endpoints.
    pub fn contains(&self, theta: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(theta))
    }

    /// Total length of `J_λ`.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(AngleInterval::len).sum()
    }

    /// `n` angles at the midpoints of `n` equal-measure cells of `J_λ`.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        let total = self.measure();
        (0..n)
            .map(|k| {
                let mut s = total * (k as f64 + 0.5) / n as f64;
                for iv in &self.intervals {
                    if s <= iv.len() {
                        return iv.lo + s;
                    }
                    s -= iv.len();
                }
                self.intervals.last().map_or(0.0, |iv| iv.hi)
            })
            .collect()
    }
}

/// `ϑ_A`, `ϑ_B`, `ϑᴬ`, `ϑᴮ` and `J_λ` for `λ > 0`.
pub fn critical_angles(spec: &SectorSpec, lambda: f64) -> Result<AdmissibleSet> {
    if !(lambda > 0.0) {
        return Err(GeometryError::OutOfRange { what: "lambda", value: lambda, lo: 0.0, hi: f64::INFINITY });
    }
    let top = (PI + spec.beta()) / 2.0;
    let ta = theta_a(spec, lambda);
    let tb = theta_b(spec, lambda);
    let intervals = if lambda >= lambda_c(spec) {
        vec![AngleInterval { lo: 0.0, hi: top }]
    } else {
        let mut v = vec![AngleInterval { lo: 0.0, hi: ta.min(top) }];
        if tb <= top {
            v.push(AngleInterval { lo: tb, hi: top });
        }
        v
    };
    Ok(AdmissibleSet {
        lambda,
        intervals,
        theta_a: ta,
        theta_b: tb,
        theta_a_cap: ta.min(tb).min(top),
        theta_b_cap: tb.min(top),
    })
}

/// `λ̂ = λ sin ϑ / sin(ϑ − β)`.
pub fn lambda_hat(spec: &SectorSpec, lambda: f64, theta: f64) -> Result<f64> {
    let d = (theta - spec.beta()).sin();
    if d.abs() < SINGULAR_EPS {
        return Err(GeometryError::DomainViolation { what: "lambda_hat", theta });
    }
    Ok(lambda * theta.sin() / d)
}

/// `λ̌ = λ + λ sin β / sin(2ϑ − β)`.
pub fn lambda_check(spec: &SectorSpec, lambda: f64, theta: f64) -> Result<f64> {
    let d = (2.0 * theta - spec.beta()).sin();
    if d.abs() < SINGULAR_EPS {
        return Err(GeometryError::DomainViolation { what: "lambda_check", theta });
    }
    Ok(lambda + lambda * spec.beta().sin() / d)
}

/// Piecewise `ζ(ϑ)` on `[β/2, (π+β)/2]`, switching branches at `(π+3β)/4`.
pub fn zeta(spec: &SectorSpec, theta: f64) -> Result<f64> {
    let b = spec.beta();
    let (lo, hi) = (b / 2.0, (PI + b) / 2.0);
    if theta < lo - 1e-15 || theta > hi + 1e-15 {
        return Err(GeometryError::OutOfRange { what: "theta", value: theta, lo, hi });
    }
    Ok(if theta <= (PI + 3.0 * b) / 4.0 {
        let s = (2.0 * theta - b).sin();
        s / (b.sin() + s)
    } else {
        (theta - b).sin() / theta.sin()
    })
}

/// `λ_* = λ/ζ(ϑ)`.
pub fn lambda_star(spec: &SectorSpec, lambda: f64, theta: f64) -> Result<f64> {
    let z = zeta(spec, theta)?;
    if z.abs() < SINGULAR_EPS {
        return Err(GeometryError::DomainViolation { what: "lambda_star", theta });
    }
    Ok(lambda / z)
}

/// `λ_M(ϑ) = sup{λ > 0 : T_{λ,ϑ} ∩ Σ ≠ ∅}` for `ϑ ∈ (0, π)`.
///
/// `Σ` is convex, so this is the support value of the closed sector in the direction of the
/// line normal, divided by `sin ϑ`.
pub fn lambda_m(spec: &SectorSpec, theta: f64) -> Result<f64> {
    let st = theta.sin();
    if !(theta > 0.0 && theta < PI) || st <= 0.0 {
        return Err(GeometryError::OutOfRange { what: "theta", value: theta, lo: 0.0, hi: PI });
    }
    let n = Point::unit(theta - spec.beta() / 2.0 - FRAC_PI_2);
    let mut support = spec.p_plus().dot(n).max(spec.p_minus().dot(n)).max(0.0);
    if n.angle().abs() <= spec.alpha() / 2.0 {
        support = support.max(spec.center().dot(n) + 1.0);
    }
    Ok(support / st)
}

/// `λ_max = (1 − a)·sec(β/2)`.
pub fn lambda_max(spec: &SectorSpec) -> f64 {
    (1.0 - spec.a()) / (spec.beta() / 2.0).cos()
}

/// `λ ↦ λ̌(λ, ϑ)` treating the pole `sin(2ϑ−β) ↓ 0` as `+∞`.
fn lambda_check_or_inf(spec: &SectorSpec, lambda: f64, theta: f64) -> f64 {
    let d = (2.0 * theta - spec.beta()).sin();
    if d <= 0.0 {
        f64::INFINITY
    } else {
        lambda + lambda * spec.beta().sin() / d
    }
}

/// `l_* ∈ (0, l_N)` with `λ̌(l_*, ϑ_B(l_*)) = l_N`; undefined for the spherical sector.
pub fn l_star(spec: &SectorSpec) -> Result<f64> {
    if spec.beta() >= spec.alpha() {
        return Err(GeometryError::InvalidSpec("l_* needs beta < alpha".into()));
    }
    let l_n = spec.l_n();
    bisect(
        |lam| {
            if lam >= l_n {
                f64::INFINITY
            } else {
                lambda_check_or_inf(spec, lam, theta_b(spec, lam)) - l_n
            }
        },
        0.0,
        l_n,
    )
}

/// `ϑ_λ ∈ ((π+2β)/4, (π+β)/2)`: the root of `λ̌(λ, ϑ) = l_N` for `0 < λ < l_N/(1 + sin β)`.
pub fn theta_lambda(spec: &SectorSpec, lambda: f64) -> Result<f64> {
    let b = spec.beta();
    let l_n = spec.l_n();
    let hi_lambda = l_n / (1.0 + b.sin());
    if !(lambda > 0.0 && lambda < hi_lambda) {
        return Err(GeometryError::OutOfRange { what: "lambda", value: lambda, lo: 0.0, hi: hi_lambda });
    }
    let (lo, hi) = ((PI + 2.0 * b) / 4.0, (PI + b) / 2.0);
    bisect(|th| if th >= hi { f64::INFINITY } else { lambda_check_or_inf(spec, lambda, th) - l_n }, lo, hi)
}

/// `ω̄_λ`: `ϑᴮ(λ)` above `l_*`, otherwise `min{(π + ϑ_A(λ))/2, ϑ_λ}`.
pub fn omega_bar(spec: &SectorSpec, lambda: f64) -> Result<f64> {
    omega_bar_with(spec, lambda, l_star(spec)?)
}

fn omega_bar_with(spec: &SectorSpec, lambda: f64, ls: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(GeometryError::OutOfRange { what: "lambda", value: lambda, lo: 0.0, hi: f64::INFINITY });
    }
    if lambda > ls {
        Ok(theta_b(spec, lambda).min((PI + spec.beta()) / 2.0))
    } else {
        Ok(((PI + theta_a(spec, lambda)) / 2.0).min(theta_lambda(spec, lambda)?))
    }
}

/// `ι(λ) = λ̂(λ, ω̄_λ)`.
pub fn iota(spec: &SectorSpec, lambda: f64) -> Result<f64> {
    lambda_hat(spec, lambda, omega_bar(spec, lambda)?)
}

/// `ȷ = ι⁻¹` on `(0, l_*]`, for `β ≤ π/2` where `ι` is strictly increasing.
pub fn jmath(spec: &SectorSpec, lambda: f64) -> Result<f64> {
    if spec.beta() > FRAC_PI_2 {
        return Err(GeometryError::OutOfRange { what: "beta", value: spec.beta(), lo: 0.0, hi: FRAC_PI_2 });
    }
    let ls = l_star(spec)?;
    let iota_of = |mu: f64| -> Result<f64> { lambda_hat(spec, mu, omega_bar_with(spec, mu, ls)?) };
    let top = iota_of(ls)?;
    if !(lambda > 0.0 && lambda <= top) {
        return Err(GeometryError::OutOfRange { what: "lambda", value: lambda, lo: 0.0, hi: top });
    }
    bisect(|mu| if mu <= 0.0 { -lambda } else { iota_of(mu).map_or(f64::NAN, |v| v - lambda) }, 0.0, ls)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(alpha: f64, beta: f64) -> SectorSpec {
        SectorSpec::new(alpha, beta).unwrap()
    }

    #[test]
    fn theta_a_is_right_angle_at_projection() {
        let s = sp(2.0 * PI / 3.0, 5.0 * PI / 12.0);
        let lam = s.a().abs() * (s.beta() / 2.0).cos();
        assert!((theta_a(&s, lam) - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn theta_b_is_right_angle_at_projection() {
        let s = sp(2.0 * PI / 3.0, PI / 3.0);
        let lam = s.l_n() * s.beta().cos();
        assert!((theta_b(&s, lam) - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn theta_a_tends_to_half_beta() {
        let s = sp(2.0 * PI / 3.0, PI / 3.0);
        assert!((theta_a(&s, 1e-12) - s.beta() / 2.0).abs() < 1e-10);
    }

    #[test]
    fn critical_lines_pass_through_center_and_mixed_point() {
        let s = sp(2.4, 1.1);
        for lam in [0.1, 0.4, 0.9, 1.7] {
            let ta = theta_a(&s, lam);
            let tb = theta_b(&s, lam);
            let la = crate::lines::MovingLine::new(&s, lam, ta);
            let lb = crate::lines::MovingLine::new(&s, lam, tb);
            assert!(la.signed_dist(s.center()).abs() < 1e-13);
            assert!(lb.signed_dist(s.p_plus()).abs() < 1e-13);
        }
    }

    #[test]
    fn lambda_c_lines_meet_at_both_points() {
        let s = sp(2.4, 1.1);
        let lc = lambda_c(&s);
        let mid = (s.alpha() + s.beta()) / 2.0;
        assert!((theta_a(&s, lc) - mid).abs() < 1e-12);
        assert!((theta_b(&s, lc) - mid).abs() < 1e-12);
    }

    #[test]
    fn spherical_conventions() {
        let s = SectorSpec::spherical(1.0).unwrap();
        assert_eq!(theta_a(&s, 0.3), PI);
        assert_eq!(lambda_c(&s), 0.0);
        let j = critical_angles(&s, 0.3).unwrap();
        assert_eq!(j.intervals.len(), 1);
    }

    #[test]
    fn hat_and_check_examples() {
        let s = sp(2.0 * PI / 3.0, PI / 3.0);
        let lam = 0.37;
        assert!((lambda_hat(&s, lam, FRAC_PI_2).unwrap() - 2.0 * lam).abs() < 1e-14);
        assert!((lambda_check(&s, lam, FRAC_PI_2).unwrap() - 2.0 * lam).abs() < 1e-14);
        let top = (PI + s.beta()) / 2.0;
        assert!((lambda_hat(&s, lam, top).unwrap() - lam).abs() < 1e-14);
        assert!((zeta(&s, top).unwrap() - 1.0).abs() < 1e-14);
        let sw = (PI + 3.0 * s.beta()) / 4.0;
        let b1 = (2.0 * sw - s.beta()).sin() / (s.beta().sin() + (2.0 * sw - s.beta()).sin());
        let b2 = (sw - s.beta()).sin() / sw.sin();
        assert!((b1 - 0.5).abs() < 1e-14 && (b2 - 0.5).abs() < 1e-14);
    }

    #[test]
    fn singularities_are_reported() {
        let s = sp(2.0, 1.0);
        assert!(matches!(lambda_hat(&s, 1.0, 1.0), Err(GeometryError::DomainViolation { .. })));
        assert!(matches!(lambda_check(&s, 1.0, 0.5), Err(GeometryError::DomainViolation { .. })));
        assert!(zeta(&s, 0.1).is_err());
    }

    #[test]
    fn theta_lambda_examples() {
        let s = sp(PI / 2.0 + 0.3, PI / 3.0);
        let half = theta_lambda(&s, s.l_n() / 2.0).unwrap();
        assert!((half - FRAC_PI_2).abs() < 1e-11);
        let ls = l_star(&s).unwrap();
        let t = theta_lambda(&s, ls).unwrap();
        assert!((t - (PI + 3.0 * s.beta()) / 4.0).abs() < 1e-10);
        assert!(theta_lambda(&s, s.l_n()).is_err());
    }

    #[test]
    fn theta_lambda_back_substitution() {
        let s = sp(PI / 2.0, 5.0 * PI / 12.0);
        let lam = 0.9 * l_star(&s).unwrap();
        let t = theta_lambda(&s, lam).unwrap();
        let b = s.beta();
        assert!(t > (PI + 3.0 * b) / 4.0 && t < (PI + b) / 2.0);
        assert!((lambda_check(&s, lam, t).unwrap() - s.l_n()).abs() < 1e-10);
    }

    #[test]
    fn l_star_matches_closed_form_inverse() {
        for (al, be) in [(2.0 * PI / 3.0, PI / 3.0), (PI, 7.0 * PI / 12.0), (1.7, 0.4)] {
            let s = sp(al, be);
            let closed = theta_b_inverse(&s, (PI + 3.0 * be) / 4.0);
            assert!((l_star(&s).unwrap() - closed).abs() < 1e-11);
        }
    }

    #[test]
    fn omega_bar_above_l_star() {
        let s = sp(2.0 * PI / 3.0, 5.0 * PI / 12.0);
        let ls = l_star(&s).unwrap();
        let lam = 1.2 * ls;
        let expected = theta_b(&s, lam).min((PI + s.beta()) / 2.0);
        assert_eq!(omega_bar(&s, lam).unwrap(), expected);
    }

    #[test]
    fn omega_bar_at_l_star() {
        let s = sp(2.0 * PI / 3.0, 5.0 * PI / 12.0);
        let ls = l_star(&s).unwrap();
        let w = omega_bar(&s, ls).unwrap();
        assert!((w - (PI + 3.0 * s.beta()) / 4.0).abs() < 1e-10);
    }

    #[test]
    fn jmath_inverts_iota() {
        let s = sp(2.0 * PI / 3.0, 5.0 * PI / 12.0);
        let ls = l_star(&s).unwrap();
        let top = iota(&s, ls).unwrap();
        for f in [0.05, 0.3, 0.6, 0.95, 1.0] {
            let lam = f * top;
            let j = jmath(&s, lam).unwrap();
            assert!((iota(&s, j).unwrap() - lam).abs() < 1e-10, "f = {f}");
        }
        assert!(jmath(&s, 1.01 * top).is_err());
    }

    #[test]
    fn lambda_m_examples() {
        let s = sp(2.0 * PI / 3.0, FRAC_PI_2);
        let lmax = lambda_max(&s);
        let mut best: f64 = 0.0;
        for k in 1..=2000 {
            let th = (PI + s.beta()) / 2.0 * k as f64 / 2000.0;
            best = best.max(lambda_m(&s, th).unwrap());
        }
        assert!(best <= lmax + 1e-12);
        assert!((best - lmax).abs() < 1e-12);
    }

    #[test]
    fn admissible_set_sampling_stays_inside() {
        let s = sp(5.0 * PI / 6.0, 5.0 * PI / 12.0);
        let j = critical_angles(&s, 0.5 * lambda_c(&s)).unwrap();
        assert_eq!(j.intervals.len(), 2);
        for th in j.sample(7) {
            assert!(j.contains(th));
        }
        assert!(!j.contains(0.5 * (j.theta_a + j.theta_b)));
        assert!(j.contains(j.theta_a) && j.contains(j.theta_b));
    }
}
