use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Svd,
    Kernel,
}

/// Settings shared by all commands. Values come from an optional JSON config
/// file, then command-line flags.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub gamma: f64,
    pub order: u32,
    pub n_max: u32,
    /// α nodes of the boundary grid; β nodes are twice this. `None` sizes
    /// the grid from the data degree.
    pub quad_nodes: Option<usize>,
    /// Relative tolerance of range condition (a) and of the support check.
    pub tol: f64,
    pub b_max: f64,
    pub c_max: f64,
    pub route: Route,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Largest `|z|` of the kernel-route evaluation grid.
    pub kernel_radius: f64,
    /// Weight exponents exercised by `selftest` when `--gamma` is not given.
    pub gammas: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            gamma: 0.0,
            order: 0,
            n_max: 4,
            quad_nodes: None,
            tol: 1e-8,
            b_max: 1e12,
            c_max: 1e12,
            route: Route::Svd,
            seed: 0,
            out: None,
            kernel_radius: 0.9,
            gammas: vec![-0.5, 0.0, 0.5],
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("config {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad_gamma = |g: f64| !(g > -1.0 && g < 1.0);
        if bad_gamma(self.gamma) {
            return Err(dtx_core::Error::Domain(format!("weight exponent {} outside (-1, 1)", self.gamma)).into());
        }
        if let Some(g) = self.gammas.iter().copied().find(|&g| bad_gamma(g)) {
            return Err(dtx_core::Error::Domain(format!("weight exponent {g} outside (-1, 1)")).into());
        }
        if !(self.tol > 0.0 && self.b_max > 0.0 && self.c_max > 0.0) {
            return Err(CliError::Config("tolerances must be positive".into()));
        }
        if !(self.kernel_radius > 0.0 && self.kernel_radius < 1.0) {
            return Err(CliError::Config(format!("kernel radius {} outside (0, 1)", self.kernel_radius)));
        }
        if self.quad_nodes == Some(0) {
            return Err(CliError::Config("--quad-nodes must be positive".into()));
        }
        Ok(())
    }

    pub fn tolerances(&self) -> dtx_core::dataspace::RangeTolerances {
        dtx_core::dataspace::RangeTolerances { a_rel: self.tol, b_max: self.b_max, c_max: self.c_max }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn gamma_outside_interval_rejected() {
        for g in [-1.0, 1.0, 1.5, f64::NAN] {
            let c = RunConfig { gamma: g, ..RunConfig::default() };
            assert!(c.validate().is_err());
        }
    }

    #[test]
    fn partial_json_fills_defaults() {
        let c: RunConfig = serde_json::from_str(r#"{"gamma": 0.25, "route": "kernel"}"#).unwrap();
        assert_eq!(c.gamma, 0.25);
        assert_eq!(c.route, Route::Kernel);
        assert_eq!(c.n_max, 4);
        assert!(serde_json::from_str::<RunConfig>(r#"{"gama": 0.25}"#).is_err());
    }
}
