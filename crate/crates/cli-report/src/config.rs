use crate::angles::{check_radians, sector};
use crate::error::{CliError, Result};
use moving_plane_audit::KAPPA;
use sector_fem::{NonlinearitySpec, DEFAULT_TOL};
use sector_geometry::SectorSpec;
use sector_mesh::MeshOptions;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

fn default_h() -> f64 {
    0.04
}
fn default_f() -> String {
    NonlinearitySpec::default().to_string()
}
fn default_tol() -> f64 {
    DEFAULT_TOL
}
fn default_kappa() -> f64 {
    KAPPA
}
fn default_fill() -> usize {
    5
}
fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    #[serde(default = "default_h")]
    pub h: f64,
    #[serde(default)]
    pub symmetric: bool,
}

impl From<MeshConfig> for MeshOptions {
    fn from(m: MeshConfig) -> Self {
        MeshOptions::new(m.h).symmetric(m.symmetric)
    }
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self { h: default_h(), symmetric: false }
    }
}

/// A reproducible run: every parameter of a solve, audit or sweep, together with its seed.
/// Sweeps cover every `(α, β)` pair of the two lists with `β ≤ α`, in list order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// Translation parameters; empty selects the default grid of each sector.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lambda: Vec<f64>,
    /// Rotation parameters; empty selects the admissible-set policy.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub theta: Vec<f64>,
    /// Fill angles per `λ` under the admissible-set policy.
    #[serde(default = "default_fill")]
    pub theta_fill: usize,
    #[serde(default)]
    pub mesh: MeshConfig,
    /// Nonlinearity in the `const:c | linear:mu | power:c,p` syntax.
    #[serde(default = "default_f")]
    pub f: String,
    /// Newton residual tolerance.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Audit tolerance constant of `1e−8 + κh²`.
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    /// Judge symmetry on unsymmetric meshes by the decay of the defect under one refinement.
    #[serde(default = "yes")]
    pub refine_symmetry: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alpha: Vec::new(),
            beta: Vec::new(),
            lambda: Vec::new(),
            theta: Vec::new(),
            theta_fill: default_fill(),
            mesh: MeshConfig::default(),
            f: default_f(),
            tol: default_tol(),
            kappa: default_kappa(),
            refine_symmetry: true,
            seed: 0,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::usage(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config fields always serialize")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("reading config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn nonlinearity(&self) -> Result<NonlinearitySpec> {
        self.f.parse().map_err(|e| CliError::usage(format!("--f: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        for &a in self.alpha.iter().chain(&self.beta).chain(&self.theta) {
            check_radians(a).map_err(CliError::Usage)?;
        }
        if !(self.mesh.h > 0.0 && self.mesh.h <= 0.2) {
            return Err(CliError::usage(format!("mesh size h = {} outside (0, 0.2]", self.mesh.h)));
        }
        if !(self.tol > 0.0 && self.kappa >= 0.0) {
            return Err(CliError::usage(format!("need tol > 0 and kappa >= 0, got {} and {}", self.tol, self.kappa)));
        }
        if let Some(l) = self.lambda.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
            return Err(CliError::usage(format!("lambda = {l} must be finite and nonnegative")));
        }
        self.nonlinearity()?;
        self.entries()?;
        Ok(())
    }

    /// The `(α, β)` pairs with `β ≤ α`, alpha-major.
    pub fn entries(&self) -> Result<Vec<SectorSpec>> {
        let mut out = Vec::new();
        for &a in &self.alpha {
            for &b in self.beta.iter().filter(|&&b| b <= a + 1e-12) {
                out.push(sector(a, b).map_err(CliError::Usage)?);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn defaults_fill_missing_fields() {
        let cfg = RunConfig::from_toml("alpha = [2.0943951023931953]\nbeta = [1.0471975511965976]\n").unwrap();
        assert_eq!(cfg.mesh, MeshConfig::default());
        assert_eq!(cfg.f, "const:1");
        assert_eq!(cfg.kappa, KAPPA);
        assert_eq!(cfg.entries().unwrap().len(), 1);
    }

    #[test]
    fn round_trip() {
        let cfg = RunConfig {
            alpha: vec![2.0 * PI / 3.0, PI],
            beta: vec![PI / 3.0, 0.1 + 0.2],
            lambda: vec![0.125, 1.0 / 3.0],
            mesh: MeshConfig { h: 0.02, symmetric: true },
            f: "power:1,2".into(),
            seed: 42,
            out: Some("sweep.csv".into()),
            ..RunConfig::default()
        };
        assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn bad_configs_are_usage_errors() {
        for text in [
            "alpha = [120.0]\nbeta = [60.0]\n",
            "alpha = [2.0]\nbeta = [1.0]\nf = \"cubic:1\"\n",
            "alpha = [2.0]\nbeta = [1.0]\nunknown = 1\n",
            "alpha = [2.0]\nbeta = [1.0]\n[mesh]\nh = 0.0\n",
        ] {
            assert!(matches!(RunConfig::from_toml(text), Err(CliError::Usage(_))), "{text}");
        }
    }
}
