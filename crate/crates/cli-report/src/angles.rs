use sector_geometry::SectorSpec;
use std::f64::consts::{PI, TAU};

/// Parses an angle in radians. Degree suffixes and magnitudes above `2π`, which only make
/// sense as degrees, are rejected.
pub fn parse_radians(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let lower = t.to_ascii_lowercase();
    if t.contains('°') || lower.ends_with("deg") || lower.ends_with("degrees") || lower.ends_with('d') {
        return Err(format!("`{s}`: angles are radians only; degree input is rejected"));
    }
    let v: f64 = t.parse().map_err(|_| format!("`{s}` is not a number"))?;
    check_radians(v)
}

/// Rejects non-finite angles and magnitudes above `2π`.
pub fn check_radians(v: f64) -> Result<f64, String> {
    if !v.is_finite() {
        return Err(format!("angle {v} is not finite"));
    }
    if v.abs() > TAU {
        return Err(format!("angle {v} exceeds 2π; angles are radians only, degree input is rejected"));
    }
    Ok(v)
}

/// The sector with arc opening `alpha` and amplitude `beta`; `alpha = beta` gives the spherical
/// sector.
pub fn sector(alpha: f64, beta: f64) -> Result<SectorSpec, String> {
    check_radians(alpha)?;
    check_radians(beta)?;
    let spec = if (alpha - beta).abs() <= 1e-12 { SectorSpec::spherical(beta) } else { SectorSpec::new(alpha, beta) };
    spec.map_err(|e| format!("{e} (need 0 < beta <= alpha <= {PI})"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_are_rejected() {
        for s in ["90deg", "90°", "120", "45 degrees", "30d", "-400"] {
            assert!(parse_radians(s).is_err(), "{s}");
        }
        assert_eq!(parse_radians(" 1.5708 ").unwrap(), 1.5708);
        assert!(parse_radians("abc").is_err());
    }

    #[test]
    fn equal_angles_give_the_spherical_sector() {
        let s = sector(1.5708, 1.5708).unwrap();
        assert!(s.is_spherical() && s.a().abs() < 1e-15);
        assert!(sector(1.0, 2.0).is_err());
    }
}
