//! Waveform and parameter types shared by the simulator, predictor, and
//! estimator, plus sampling-window validation.

use alloc::vec::Vec;
use core::fmt;

/// Time-aligned series of submodule voltage, switching state, and arm
/// current at a fixed sample rate.
///
/// All series are in SI units and share one sample period `ts`; sample `k`
/// was taken at `t0 + k * ts`. The switching state is kept numeric (each
/// sample exactly 0 or 1) so the capacitor current is the plain product
/// `i_arm[k] * v_sw[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingWindow {
    /// Start time in seconds.
    pub t0: f64,
    /// Sample period in seconds.
    pub ts: f64,
    /// Submodule voltage in volts.
    pub v_sm: Vec<f64>,
    /// Switching state per sample, exactly 0.0 or 1.0.
    pub v_sw: Vec<f64>,
    /// Arm current in amperes.
    pub i_arm: Vec<f64>,
}

impl SamplingWindow {
    /// Number of samples, taken from the voltage series.
    pub fn len(&self) -> usize {
        self.v_sm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v_sm.is_empty()
    }

    /// Sample instant `t0 + k * ts`.
    pub fn time_at(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.ts
    }

    /// Count of switching-state flips between consecutive samples.
    pub fn switching_transitions(&self) -> usize {
        self.v_sw.windows(2).filter(|w| w[0] != w[1]).count()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_window(self)
    }
}

/// Capacitor current series: the arm current gated by the switching state.
/// When the submodule is bypassed the capacitor carries no current.
pub fn capacitor_current(window: &SamplingWindow) -> Vec<f64> {
    window
        .i_arm
        .iter()
        .zip(&window.v_sw)
        .map(|(i, s)| i * s)
        .collect()
}

/// A capacitance/ESR pair, the two-dimensional point the estimator searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacitorParams {
    /// Capacitance in farads.
    pub c: f64,
    /// Equivalent series resistance in ohms.
    pub esr: f64,
}

impl CapacitorParams {
    pub const fn new(c: f64, esr: f64) -> Self {
        Self { c, esr }
    }
}

/// Nameplate reference values that end-of-life thresholds are taken
/// relative to. Both must be positive to be meaningful.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceParams {
    /// Rated capacitance in farads.
    pub c0: f64,
    /// Initial ESR in ohms.
    pub esr0: f64,
}

impl ReferenceParams {
    pub const fn new(c0: f64, esr0: f64) -> Self {
        Self { c0, esr0 }
    }

    pub fn is_valid(&self) -> bool {
        self.c0 > 0.0 && self.c0.is_finite() && self.esr0 > 0.0 && self.esr0.is_finite()
    }
}

/// The series a per-sample violation was found in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesName {
    SubmoduleVoltage,
    SwitchingState,
    ArmCurrent,
}

impl fmt::Display for SeriesName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesName::SubmoduleVoltage => "v_sm",
            SeriesName::SwitchingState => "v_sw",
            SeriesName::ArmCurrent => "i_arm",
        })
    }
}

/// A reason a window is unusable for prediction or estimation.
///
/// Downstream operations reject an invalid window with the same code the
/// validator reports, so a caller sees one vocabulary everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    /// The three series do not all have the same length.
    SeriesLengthMismatch,
    /// Fewer than two samples; the voltage recursion needs at least one step.
    WindowTooShort,
    /// Sample period is zero, negative, or not finite.
    NonPositiveSamplePeriod,
    /// A switching-state sample is neither exactly 0 nor exactly 1.
    /// Reported for the first offending index.
    NonBinarySwitchingState { index: usize },
    /// A sample is NaN or infinite. Reported once per series, for the
    /// first offending index.
    NonFiniteSample { series: SeriesName, index: usize },
    /// No positive voltage sample, so the normalized cost is undefined.
    DegenerateVoltage,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SeriesLengthMismatch => f.write_str("series lengths differ"),
            Violation::WindowTooShort => f.write_str("window has fewer than two samples"),
            Violation::NonPositiveSamplePeriod => f.write_str("sample period is not positive"),
            Violation::NonBinarySwitchingState { index } => {
                write!(f, "switching state at sample {index} is not 0 or 1")
            }
            Violation::NonFiniteSample { series, index } => {
                write!(f, "{series} at sample {index} is not finite")
            }
            Violation::DegenerateVoltage => {
                f.write_str("no positive voltage sample; cost normalization undefined")
            }
        }
    }
}

/// A condition that does not invalidate the window but degrades what can
/// be estimated from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationWarning {
    /// The window contains no switching transitions. The ESR term of the
    /// prediction model only produces voltage steps at transitions, so ESR
    /// is unobservable from this window.
    NoSwitchingTransitions,
}

impl fmt::Display for ValidationWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationWarning::NoSwitchingTransitions => {
                f.write_str("no switching transitions in window; ESR unobservable")
            }
        }
    }
}

/// Outcome of validating a window: all violations found plus advisory
/// warnings. An empty violation list means the window is usable.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<ValidationWarning>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<Violation> {
        self.violations.first().copied()
    }
}

/// Check a window against every structural requirement of the prediction
/// model and cost function.
///
/// Violations of independent requirements accumulate rather than
/// short-circuit, so one pass reports everything wrong with a captured
/// window. Per-sample checks report the first offending index only.
pub fn validate_window(window: &SamplingWindow) -> ValidationReport {
    let mut report = ValidationReport::default();

    let n = window.v_sm.len();
    if window.v_sw.len() != n || window.i_arm.len() != n {
        report.violations.push(Violation::SeriesLengthMismatch);
    }
    if n < 2 {
        report.violations.push(Violation::WindowTooShort);
    }
    if !(window.ts > 0.0 && window.ts.is_finite()) {
        report.violations.push(Violation::NonPositiveSamplePeriod);
    }

    let series = [
        (SeriesName::SubmoduleVoltage, &window.v_sm),
        (SeriesName::SwitchingState, &window.v_sw),
        (SeriesName::ArmCurrent, &window.i_arm),
    ];
    for (name, values) in series {
        if let Some(index) = values.iter().position(|x| !x.is_finite()) {
            report.violations.push(Violation::NonFiniteSample {
                series: name,
                index,
            });
        }
    }

    if let Some(index) = window.v_sw.iter().position(|s| *s != 0.0 && *s != 1.0) {
        report
            .violations
            .push(Violation::NonBinarySwitchingState { index });
    }

    if n > 0 && !window.v_sm.iter().any(|v| *v > 0.0) {
        report.violations.push(Violation::DegenerateVoltage);
    }

    if window.switching_transitions() == 0 {
        report
            .warnings
            .push(ValidationWarning::NoSwitchingTransitions);
    }

    report
}
