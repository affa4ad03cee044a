//! Bracketed bisection shared by every root-finding routine in the crate.

use crate::error::{GeometryError, Result};

/// Absolute tolerance on the abscissa for all root finding.
pub const ROOT_TOL: f64 = 1e-12;
/// Iteration cap for all root finding.
pub const ROOT_MAX_ITER: usize = 200;

/// Finds a zero of `f` on `[lo, hi]` by bisection.
///
/// `f(lo)` and `f(hi)` must have opposite signs (zero at either end is accepted).
/// Stops once the bracket is narrower than [`ROOT_TOL`] or after [`ROOT_MAX_ITER`] halvings.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.is_nan() || fhi.is_nan() || flo.signum() == fhi.signum() {
        return Err(GeometryError::RootBracket { lo, hi, flo, fhi });
    }
    for _ in 0..ROOT_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= ROOT_TOL || mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn decreasing_function() {
        let r = bisect(|x| 1.0 - x, 0.0, 3.0).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_unbracketed() {
        assert!(matches!(bisect(|x| x * x + 1.0, -1.0, 1.0), Err(GeometryError::RootBracket { .. })));
    }

    #[test]
    fn accepts_infinite_endpoint() {
        let r = bisect(|x: f64| if x >= 1.0 { f64::INFINITY } else { x - 0.5 }, 0.0, 1.0).unwrap();
        assert!((r - 0.5).abs() < 1e-12);
    }
}
