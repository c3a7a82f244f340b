//! Configuration files for the simulator and the estimator.
//!
//! Files are flat key/value TOML, or JSON when the path ends in `.json`.
//! Key names carry explicit SI units (`c_farads`, `bounds_esr_ohms`) so a
//! value can never be misread as millifarads or milliohms. Every key is
//! optional and defaults to the library default, so an empty file (or no
//! file at all) runs the reference setup.

use std::fs;
use std::path::Path;

use capmon_core::{CapacitorParams, PsoConfig, ScenarioConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Scenario config as stored on disk. Field names mirror the library
/// scenario config with unit suffixes; the ground-truth pair is flattened
/// into `c_farads` / `esr_ohms`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioFile {
    pub c_farads: f64,
    pub esr_ohms: f64,
    pub v_sm_dc_volts: f64,
    pub i_dc_amperes: f64,
    pub i_ac_mag_amperes: f64,
    pub i_2h_mag_amperes: f64,
    pub f_grid_hertz: f64,
    pub f_sw_hertz: f64,
    pub duty: f64,
    pub f_sa_hertz: f64,
    pub window_len_seconds: f64,
    pub noise_sigma_v_volts: f64,
    pub noise_sigma_i_amperes: f64,
    pub seed: u64,
}

impl Default for ScenarioFile {
    fn default() -> Self {
        Self::from_core(&ScenarioConfig::default())
    }
}

impl ScenarioFile {
    pub fn from_core(cfg: &ScenarioConfig) -> Self {
        Self {
            c_farads: cfg.truth.c,
            esr_ohms: cfg.truth.esr,
            v_sm_dc_volts: cfg.v_sm_dc,
            i_dc_amperes: cfg.i_dc,
            i_ac_mag_amperes: cfg.i_ac_mag,
            i_2h_mag_amperes: cfg.i_2h_mag,
            f_grid_hertz: cfg.f_grid,
            f_sw_hertz: cfg.f_sw,
            duty: cfg.duty,
            f_sa_hertz: cfg.f_sa,
            window_len_seconds: cfg.window_len,
            noise_sigma_v_volts: cfg.noise_sigma_v,
            noise_sigma_i_amperes: cfg.noise_sigma_i,
            seed: cfg.seed,
        }
    }

    pub fn to_core(&self) -> ScenarioConfig {
        ScenarioConfig {
            truth: CapacitorParams::new(self.c_farads, self.esr_ohms),
            v_sm_dc: self.v_sm_dc_volts,
            i_dc: self.i_dc_amperes,
            i_ac_mag: self.i_ac_mag_amperes,
            i_2h_mag: self.i_2h_mag_amperes,
            f_grid: self.f_grid_hertz,
            f_sw: self.f_sw_hertz,
            duty: self.duty,
            f_sa: self.f_sa_hertz,
            window_len: self.window_len_seconds,
            noise_sigma_v: self.noise_sigma_v_volts,
            noise_sigma_i: self.noise_sigma_i_amperes,
            seed: self.seed,
        }
    }
}

/// Estimator config as stored on disk. Search bounds are `[lo, hi]`
/// arrays; everything else is scalar. The dimensionless PSO weights and
/// the normalized velocity clamp carry no unit suffix.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct PsoFile {
    pub swarm_size: usize,
    pub cognitive_weight: f64,
    pub social_weight: f64,
    pub inertia_start: f64,
    pub inertia_end: f64,
    pub max_iterations: usize,
    pub error_limit: f64,
    pub bounds_c_farads: [f64; 2],
    pub bounds_esr_ohms: [f64; 2],
    pub repeats: usize,
    pub velocity_clamp: f64,
    pub seed: u64,
}

impl Default for PsoFile {
    fn default() -> Self {
        Self::from_core(&PsoConfig::default())
    }
}

impl PsoFile {
    pub fn from_core(cfg: &PsoConfig) -> Self {
        Self {
            swarm_size: cfg.swarm_size,
            cognitive_weight: cfg.cognitive_weight,
            social_weight: cfg.social_weight,
            inertia_start: cfg.inertia_start,
            inertia_end: cfg.inertia_end,
            max_iterations: cfg.max_iterations,
            error_limit: cfg.error_limit,
            bounds_c_farads: [cfg.bounds_c.0, cfg.bounds_c.1],
            bounds_esr_ohms: [cfg.bounds_esr.0, cfg.bounds_esr.1],
            repeats: cfg.repeats,
            velocity_clamp: cfg.velocity_clamp,
            seed: cfg.seed,
        }
    }

    pub fn to_core(&self) -> PsoConfig {
        PsoConfig {
            swarm_size: self.swarm_size,
            cognitive_weight: self.cognitive_weight,
            social_weight: self.social_weight,
            inertia_start: self.inertia_start,
            inertia_end: self.inertia_end,
            max_iterations: self.max_iterations,
            error_limit: self.error_limit,
            bounds_c: (self.bounds_c_farads[0], self.bounds_c_farads[1]),
            bounds_esr: (self.bounds_esr_ohms[0], self.bounds_esr_ohms[1]),
            repeats: self.repeats,
            velocity_clamp: self.velocity_clamp,
            seed: self.seed,
        }
    }
}

/// Load a config file, dispatching on the extension: `.json` parses as
/// JSON, `.toml` as TOML. Unknown keys are rejected so a typo cannot
/// silently fall back to a default.
pub fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read config: {e}")).with_path("config", path))?;
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => "json",
        Some("toml") => "toml",
        _ => {
            return Err(CliError::validation(
                "invalid_config",
                "unsupported config extension; use .toml or .json",
            )
            .with_path("config", path))
        }
    };
    let parsed = match format {
        "json" => serde_json::from_str(&text).map_err(|e| e.to_string()),
        _ => toml::from_str(&text).map_err(|e| e.to_string()),
    };
    parsed.map_err(|message| {
        CliError::validation("invalid_config", message).with_path("config", path)
    })
}
