//! Run configuration read from a flat JSON file.

use pmc_core::analysis::Resolution;
use pmc_core::Pmc;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Builtin such as `rotating_drop(-1)` or an expression in the invariants.
    #[serde(rename = "F")]
    pub f: String,
    #[serde(rename = "K")]
    pub k: usize,
    pub r: f64,
    #[serde(default = "default_bracket")]
    pub bracket: (f64, f64),
    #[serde(default)]
    pub resolution: ResolutionConfig,
    #[serde(default = "default_nu")]
    pub nu: f64,
    pub outputs: Outputs,
    /// Fixed parameters for `assemble`; when absent they are solved for.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Params>,
    /// Rows of the moment grid.
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResolutionConfig {
    pub n_profile: usize,
    pub n_angle: usize,
    pub quad_order: usize,
    pub l_max: usize,
}

impl Default for ResolutionConfig {
    fn default() -> Self {
        let r = Resolution::default();
        ResolutionConfig {
            n_profile: r.n_profile,
            n_angle: r.n_angle,
            quad_order: r.quad_order,
            l_max: r.l_max,
        }
    }
}

impl From<ResolutionConfig> for Resolution {
    fn from(r: ResolutionConfig) -> Self {
        Resolution {
            n_profile: r.n_profile,
            n_angle: r.n_angle,
            quad_order: r.quad_order,
            l_max: r.l_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub report_path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mesh_path: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub s: f64,
    #[serde(default)]
    pub sigma: Vec<f64>,
    #[serde(default)]
    pub delta: Vec<f64>,
}

fn default_bracket() -> (f64, f64) {
    (-4.0, 0.0)
}

fn default_nu() -> f64 {
    1.5
}

fn default_grid_points() -> usize {
    64
}

/// A parsed configuration together with the document it came from.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub config: RunConfig,
    pub raw: Value,
    pub pmc: Pmc,
}

pub fn parse(text: &str) -> Result<Loaded, String> {
    let raw: Value = serde_json::from_str(text).map_err(|e| format!("config: {e}"))?;
    let config: RunConfig = serde_json::from_value(raw.clone()).map_err(|e| format!("config: {e}"))?;
    config.validate()?;
    let pmc = Pmc::from_spec(&config.f).map_err(|e| format!("config: F: {e}"))?;
    Ok(Loaded { config, raw, pmc })
}

pub fn load(path: &Path) -> Result<Loaded, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("config {}: {e}", path.display()))?;
    parse(&text)
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        let res = &self.resolution;
        let counts = [
            ("K", self.k),
            ("n_profile", res.n_profile),
            ("n_angle", res.n_angle),
            ("quad_order", res.quad_order),
            ("l_max", res.l_max),
            ("grid_points", self.grid_points),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(format!("config: {name} must be positive"));
        }
        if !(self.nu > 1.0 && self.nu < 2.0) {
            return Err(format!("config: nu = {} outside (1, 2)", self.nu));
        }
        if !(self.r > 0.0 && self.r <= 0.5) {
            return Err(format!("config: r = {} outside (0, 0.5]", self.r));
        }
        if !(self.bracket.0 < self.bracket.1) {
            return Err(format!("config: bracket {:?} is empty", self.bracket));
        }
        if self.grid_points < 2 {
            return Err("config: grid_points must be at least 2".into());
        }
        if let Some(p) = &self.params {
            let m = self.k - 1;
            if p.sigma.len() != m || p.delta.len() != m {
                return Err(format!("config: params need {m} entries in sigma and delta"));
            }
        }
        Ok(())
    }
}
