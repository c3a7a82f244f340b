//! Capacitor-voltage prediction and the normalized prediction-error cost.
//!
//! For a candidate capacitance `c` and ESR `r`, the submodule voltage is
//! replayed from the measured currents by the discrete recursion
//!
//! ```text
//! v_hat[0] = v_sm[0]
//! v_hat[k] = v_hat[k-1] + i_c[k] * ts / c + r * (i_c[k] - i_c[k-1])
//! ```
//!
//! where `i_c[k] = i_arm[k] * v_sw[k]` is the capacitor current. The first
//! term integrates charge onto the capacitance; the second adds the ESR
//! voltage step, which is only visible where the capacitor current jumps,
//! i.e. at switching transitions. The fit of a candidate is the mean
//! squared prediction error normalized by the squared window peak voltage:
//!
//! ```text
//! v_err = sum((v_sm[k] - v_hat[k])^2) / (v_m^2 * n),   v_m = max(v_sm)
//! ```
//!
//! Normalization makes the cost dimensionless and comparable across
//! operating points, which is what the swarm's fixed error limit relies on.

use alloc::vec::Vec;
use core::fmt;

use crate::signal::{validate_window, CapacitorParams, SamplingWindow, Violation};

/// Prediction replay of one window for one candidate parameter pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionResult {
    /// Predicted voltage series, same length as the window.
    pub v_hat: Vec<f64>,
    /// Normalized mean squared prediction error.
    pub v_err: f64,
    /// Peak measured voltage used for normalization.
    pub v_m: f64,
    /// Per-sample error `v_sm[k] - v_hat[k]`.
    pub inst_err: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PredictError {
    /// The window failed validation; carries the first violation.
    InvalidWindow(Violation),
    /// Candidate capacitance must be positive and finite; the recursion
    /// divides by it.
    NonPositiveCapacitance,
}

impl fmt::Display for PredictError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictError::InvalidWindow(v) => write!(f, "invalid window: {v}"),
            PredictError::NonPositiveCapacitance => {
                f.write_str("candidate capacitance must be positive")
            }
        }
    }
}

/// One step of the voltage recursion. The simulator integrates ground-truth
/// windows through this same function so that a noise-free synthetic window
/// is exactly representable by the model at the true parameters.
#[inline]
pub(crate) fn voltage_step(v_prev: f64, i_c: f64, i_c_prev: f64, ts: f64, c: f64, esr: f64) -> f64 {
    v_prev + i_c * ts / c + esr * (i_c - i_c_prev)
}

fn check(window: &SamplingWindow, params: &CapacitorParams) -> Result<(), PredictError> {
    if let Some(violation) = validate_window(window).first_violation() {
        return Err(PredictError::InvalidWindow(violation));
    }
    if !(params.c > 0.0 && params.c.is_finite()) {
        return Err(PredictError::NonPositiveCapacitance);
    }
    Ok(())
}

/// Run the recursion, handing each predicted sample to `visit` in order.
/// Shared by every entry point so they agree bit for bit. Assumes a
/// checked window and positive capacitance.
fn fold_prediction<F: FnMut(usize, f64)>(
    window: &SamplingWindow,
    params: &CapacitorParams,
    mut visit: F,
) {
    let mut v = window.v_sm[0];
    visit(0, v);
    let mut i_c_prev = window.i_arm[0] * window.v_sw[0];
    for k in 1..window.len() {
        let i_c = window.i_arm[k] * window.v_sw[k];
        v = voltage_step(v, i_c, i_c_prev, window.ts, params.c, params.esr);
        visit(k, v);
        i_c_prev = i_c;
    }
}

/// Predicted voltage series for a candidate parameter pair.
pub fn predict_voltage(
    window: &SamplingWindow,
    params: &CapacitorParams,
) -> Result<Vec<f64>, PredictError> {
    check(window, params)?;
    let mut v_hat = Vec::with_capacity(window.len());
    fold_prediction(window, params, |_, v| v_hat.push(v));
    Ok(v_hat)
}

/// Normalized mean squared error of a candidate, computed without
/// materializing the predicted series. This is the swarm's objective.
pub fn cost(window: &SamplingWindow, params: &CapacitorParams) -> Result<f64, PredictError> {
    check(window, params)?;
    Ok(cost_prevalidated(window, params))
}

/// The cost without re-running validation. The swarm evaluates thousands
/// of candidates against one window, so it checks the window once up
/// front and then calls this.
pub(crate) fn cost_prevalidated(window: &SamplingWindow, params: &CapacitorParams) -> f64 {
    debug_assert!(check(window, params).is_ok());
    let v_m = peak_voltage(&window.v_sm);
    let mut sum_sq = 0.0;
    fold_prediction(window, params, |k, v| {
        let e = window.v_sm[k] - v;
        sum_sq += e * e;
    });
    sum_sq / (v_m * v_m * window.len() as f64)
}

/// Full replay: predicted series, per-sample errors, and the cost.
pub fn evaluate(
    window: &SamplingWindow,
    params: &CapacitorParams,
) -> Result<PredictionResult, PredictError> {
    check(window, params)?;
    let n = window.len();
    let mut v_hat = Vec::with_capacity(n);
    let mut inst_err = Vec::with_capacity(n);
    let mut sum_sq = 0.0;
    fold_prediction(window, params, |k, v| {
        let e = window.v_sm[k] - v;
        v_hat.push(v);
        inst_err.push(e);
        sum_sq += e * e;
    });
    let v_m = peak_voltage(&window.v_sm);
    Ok(PredictionResult {
        v_hat,
        inst_err,
        v_m,
        v_err: sum_sq / (v_m * v_m * n as f64),
    })
}

/// Normalized mean squared error between a measured and a predicted series,
/// normalized by the measured peak. `None` if the lengths differ, the
/// series are empty, or the peak is not positive.
pub fn normalized_mse(measured: &[f64], predicted: &[f64]) -> Option<f64> {
    if measured.is_empty() || measured.len() != predicted.len() {
        return None;
    }
    let v_m = peak_voltage(measured);
    let normalizable = v_m.is_finite() && v_m > 0.0;
    if !normalizable {
        return None;
    }
    let sum_sq: f64 = measured
        .iter()
        .zip(predicted)
        .map(|(m, p)| (m - p) * (m - p))
        .sum();
    Some(sum_sq / (v_m * v_m * measured.len() as f64))
}

fn peak_voltage(v_sm: &[f64]) -> f64 {
    v_sm.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}
