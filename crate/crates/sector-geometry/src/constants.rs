//! Closed-form critical constants of a sector.

use crate::critical::{l_star, lambda_c, lambda_max, theta_a_inverse};
use crate::spec::SectorSpec;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Every scalar constant derived from `(α, β)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub a: f64,
    pub l_n: f64,
    pub lambda_c: f64,
    pub lambda_sharp: f64,
    pub l_perp: f64,
    pub lambda_max: f64,
    pub beta_flat: f64,
    pub zeta_flat: f64,
    pub lambda_flat: f64,
    /// Absent when `β = α`.
    pub l_star: Option<f64>,
}

/// `β♭ = max{(π + 2β)/3, π/2}`.
pub fn beta_flat(beta: f64) -> f64 {
    ((PI + 2.0 * beta) / 3.0).max(FRAC_PI_2)
}

/// `ζ♭ = max{ζ(ϑ) : ϑ ∈ [β/2, β♭]}`.
///
/// The first branch of `ζ` peaks at `(π + 2β)/4` with value `1/(1 + sin β)`; the second branch
/// increases, so its maximum on the interval sits at `β♭` when `β♭` lies past the switch.
pub fn zeta_flat(beta: f64) -> f64 {
    let bf = beta_flat(beta);
    let first = 1.0 / (1.0 + beta.sin());
    if bf > (PI + 3.0 * beta) / 4.0 {
        first.max((bf - beta).sin() / bf.sin())
    } else {
        first
    }
}

/// `λ♭ = inf{λ' > 0 : (0, β♭] ⊂ J_λ for all λ ≥ λ'}`.
///
/// Below `λ_C` the inclusion holds exactly when `β♭ ≤ ϑ_A(λ)`, and `ϑ_A` is increasing.
pub fn lambda_flat(spec: &SectorSpec) -> f64 {
    let lc = lambda_c(spec);
    theta_a_inverse(spec, beta_flat(spec.beta())).min(lc).max(0.0)
}

/// Derives every constant; `l_star` is `None` in the spherical mode.
pub fn derive_constants(spec: &SectorSpec) -> DerivedConstants {
    let (alpha, beta) = (spec.alpha(), spec.beta());
    let l_n = spec.l_n();
    DerivedConstants {
        a: spec.a(),
        l_n,
        lambda_c: lambda_c(spec),
        lambda_sharp: ((alpha - beta) / 2.0).sin() / beta.sin(),
        l_perp: (l_n * beta.cos()).max(0.0),
        lambda_max: lambda_max(spec),
        beta_flat: beta_flat(beta),
        zeta_flat: zeta_flat(beta),
        lambda_flat: lambda_flat(spec),
        l_star: l_star(spec).ok(),
    }
}
