//! Condition-monitoring core for power-converter submodule capacitors.
//!
//! The crate estimates a capacitor's capacitance and equivalent series
//! resistance (ESR) from one sampled window of submodule voltage, switching
//! state, and arm current. A discrete voltage-prediction model replays the
//! window for a candidate parameter pair; a particle-swarm search minimizes
//! the normalized mean squared prediction error; repeated runs are reduced
//! to median estimates. A synthetic scenario generator produces windows with
//! exactly known ground truth for verification, and a small health module
//! maps estimates against nameplate values to an end-of-life verdict.
//!
//! The crate is `no_std` (with `alloc`) so the estimation path can run on
//! converter control hardware; everything filesystem- or OS-facing lives in
//! the companion CLI crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod health;
pub mod predict;
pub mod pso;
pub mod seed;
pub mod signal;
pub mod sim;
pub mod stats;

pub use health::{assess, HealthStatus, Verdict};
pub use predict::{cost, evaluate, predict_voltage, PredictError, PredictionResult};
pub use pso::{estimate, run_once, EstimateError, EstimationReport, PsoConfig, RunTrace};
pub use signal::{
    capacitor_current, validate_window, CapacitorParams, ReferenceParams, SamplingWindow,
    ValidationReport, Violation,
};
pub use sim::{generate_window, ScenarioConfig, ScenarioError};
