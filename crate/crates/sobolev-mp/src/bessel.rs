use std::f64::consts::PI;
use std::sync::OnceLock;

/// Below this magnitude `J₀` is summed from its power series.
pub const SERIES_LIMIT: f64 = 8.0;
/// At and above this magnitude the Hankel asymptotic expansion is accurate to round-off.
pub const ASYMPTOTIC_LIMIT: f64 = 25.0;
/// Nodes of the trapezoidal rule for the integral representation between the two limits.
const TRAPEZOID_NODES: usize = 96;

/// Bessel function of the first kind of order zero.
///
/// Power series for `|x| ≤ 8`, the trapezoidal rule on `(1/π)∫₀^π cos(x sin t) dt` for
/// `8 < |x| < 25` (spectrally accurate for this periodic integrand), and the Hankel asymptotic
/// expansion beyond.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_LIMIT {
        j0_series(x)
    } else if x < ASYMPTOTIC_LIMIT {
        j0_trapezoid(x, TRAPEZOID_NODES)
    } else {
        j0_asymptotic(x)
    }
}

fn j0_series(x: f64) -> f64 {
    let y = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..80 {
        term *= y / (k * k) as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) && k > 2 {
            break;
        }
    }
    sum
}

/// `(1/π)∫₀^π cos(x sin t) dt` by the composite trapezoidal rule with `n` panels.
pub fn j0_trapezoid(x: f64, n: usize) -> f64 {
    let h = PI / n as f64;
    // Both endpoints contribute cos(0) with weight one half.
    let mut sum = 1.0;
    for k in 1..n {
        sum += (x * (k as f64 * h).sin()).cos();
    }
    sum / n as f64
}

fn j0_asymptotic(x: f64) -> f64 {
    // a_k = Π_{j≤k} (−(2j−1)²) / (k! 8^k); P = Σ (−1)^m a_{2m} x^{−2m}, Q = Σ (−1)^m a_{2m+1} x^{−2m−1}.
    let (mut p, mut q) = (0.0, 0.0);
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..60usize {
        if k > 0 {
            let j = (2 * k - 1) as f64;
            a *= -(j * j) / (8.0 * k as f64);
        }
        let term = a / x.powi(k as i32);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
    }
    let chi = x - PI / 4.0;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// First positive zero of `J₀` by bisection on `[2, 3]`, computed once.
pub fn bessel_j0_first_zero() -> f64 {
    static ZERO: OnceLock<f64> = OnceLock::new();
    *ZERO.get_or_init(bisect_first_zero)
}

fn bisect_first_zero() -> f64 {
    let (mut lo, mut hi) = (2.0f64, 3.0f64);
    debug_assert!(bessel_j0(lo) > 0.0 && bessel_j0(hi) < 0.0);
    while hi - lo > 4.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if bessel_j0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
