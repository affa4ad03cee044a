use crate::error::{FemError, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// The reaction term `f` in `Δu + f(u) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonlinearitySpec {
    /// `f(u) = c`.
    Const { c: f64 },
    /// `f(u) = μ u`.
    Linear { mu: f64 },
    /// `f(u) = c |u|^{p−1} u`, the odd extension of `c u^p`.
    Power { c: f64, p: f64 },
    /// Piecewise-linear interpolation of `(u, f)` samples with constant extension.
    Tabulated { u: Vec<f64>, f: Vec<f64> },
}

impl NonlinearitySpec {
    /// Checks parameters: `p ≥ 1` keeps `f` locally Lipschitz; tables need increasing abscissae.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(FemError::InvalidInput(m.to_string()));
        match self {
            Self::Const { c } if !c.is_finite() => bad("const value must be finite"),
            Self::Linear { mu } if !mu.is_finite() => bad("linear coefficient must be finite"),
            Self::Power { c, p } if !c.is_finite() || !p.is_finite() || *p < 1.0 => {
                bad("power nonlinearity needs finite c and p >= 1")
            }
            Self::Tabulated { u, f } => {
                if u.len() < 2 || u.len() != f.len() {
                    return bad("table needs at least two (u, f) pairs of equal length");
                }
                if u.windows(2).any(|w| !(w[1] > w[0])) || f.iter().any(|v| !v.is_finite()) {
                    return bad("table abscissae must increase strictly and values be finite");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn f(&self, u: f64) -> f64 {
        match self {
            Self::Const { c } => *c,
            Self::Linear { mu } => mu * u,
            Self::Power { c, p } => c * u.abs().powf(p - 1.0) * u,
            Self::Tabulated { u: us, f: fs } => {
                let k = table_segment(us, u);
                match k {
                    None if u <= us[0] => fs[0],
                    None => fs[fs.len() - 1],
                    Some(k) => {
                        let t = (u - us[k]) / (us[k + 1] - us[k]);
                        fs[k] + t * (fs[k + 1] - fs[k])
                    }
                }
            }
        }
    }

    /// `f′(u)`; one-sided from the right at table knots.
    pub fn df(&self, u: f64) -> f64 {
        match self {
            Self::Const { .. } => 0.0,
            Self::Linear { mu } => *mu,
            Self::Power { c, p } => {
                if *p == 1.0 {
                    *c
                } else {
                    c * p * u.abs().powf(p - 1.0)
                }
            }
            Self::Tabulated { u: us, f: fs } => match table_segment(us, u) {
                None => 0.0,
                Some(k) => (fs[k + 1] - fs[k]) / (us[k + 1] - us[k]),
            },
        }
    }

    /// Whether `f` is affine in `u`, in which case one Newton step solves the problem.
    pub fn is_affine(&self) -> bool {
        matches!(self, Self::Const { .. } | Self::Linear { .. } | Self::Power { p: 1.0, .. })
    }
}

fn table_segment(us: &[f64], u: f64) -> Option<usize> {
    if u < us[0] || u >= us[us.len() - 1] {
        return None;
    }
    Some(us.partition_point(|&x| x <= u) - 1)
}

impl Default for NonlinearitySpec {
    fn default() -> Self {
        Self::Const { c: 1.0 }
    }
}

impl fmt::Display for NonlinearitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Const { c } => write!(f, "const:{c}"),
            Self::Linear { mu } => write!(f, "linear:{mu}"),
            Self::Power { c, p } => write!(f, "power:{c},{p}"),
            Self::Tabulated { u, f: v } => {
                write!(f, "table:")?;
                for (i, (a, b)) in u.iter().zip(v).enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{a},{b}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `const:c`, `linear:mu`, `power:c,p` or `table:u0,f0;u1,f1;...`.
impl FromStr for NonlinearitySpec {
    type Err = FemError;

    fn from_str(s: &str) -> Result<Self> {
        let err = || FemError::ParseNonlinearity(s.to_string());
        let (kind, args) = s.trim().split_once(':').ok_or_else(err)?;
        let nums = |a: &str| -> Result<Vec<f64>> {
            a.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| err())).collect()
        };
        let spec = match kind.trim() {
            "const" => match nums(args)?.as_slice() {
                [c] => Self::Const { c: *c },
                _ => return Err(err()),
            },
            "linear" => match nums(args)?.as_slice() {
                [mu] => Self::Linear { mu: *mu },
                _ => return Err(err()),
            },
            "power" => match nums(args)?.as_slice() {
                [c, p] => Self::Power { c: *c, p: *p },
                _ => return Err(err()),
            },
            "table" => {
                let (mut u, mut f) = (Vec::new(), Vec::new());
                for pair in args.split(';') {
                    match nums(pair)?.as_slice() {
                        [a, b] => {
                            u.push(*a);
                            f.push(*b);
                        }
                        _ => return Err(err()),
                    }
                }
                Self::Tabulated { u, f }
            }
            _ => return Err(err()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["const:1", "linear:2.5", "power:1,2", "table:0,0;1,2;3,3"] {
            let spec: NonlinearitySpec = s.parse().unwrap();
            assert_eq!(spec.to_string().parse::<NonlinearitySpec>().unwrap(), spec);
        }
        assert!("power:1".parse::<NonlinearitySpec>().is_err());
        assert!("power:1,0.5".parse::<NonlinearitySpec>().is_err());
        assert!("cubic:1".parse::<NonlinearitySpec>().is_err());
        assert!("table:1,0;0,1".parse::<NonlinearitySpec>().is_err());
    }

    #[test]
    fn derivatives_match_differences() {
        let specs = [
            NonlinearitySpec::Const { c: 2.0 },
            NonlinearitySpec::Linear { mu: -1.5 },
            NonlinearitySpec::Power { c: 1.0, p: 2.0 },
            NonlinearitySpec::Power { c: 0.5, p: 3.5 },
            NonlinearitySpec::Tabulated { u: vec![0.0, 1.0, 2.0], f: vec![0.0, 3.0, 4.0] },
        ];
        let d = 1e-6;
        for spec in &specs {
            for &u in &[-0.7, 0.3, 1.3, 2.5] {
                let fd = (spec.f(u + d) - spec.f(u - d)) / (2.0 * d);
                assert!((fd - spec.df(u)).abs() < 1e-6, "{spec} at {u}");
            }
        }
    }

    #[test]
    fn power_is_odd() {
        let s = NonlinearitySpec::Power { c: 1.0, p: 2.0 };
        assert_eq!(s.f(-0.5), -s.f(0.5));
        assert_eq!(s.f(0.5), 0.25);
    }
}
