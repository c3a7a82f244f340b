//! End-of-life assessment of estimates against nameplate values.
//!
//! An electrolytic or film capacitor is treated as worn out once its
//! capacitance has fallen to 80% of nominal or its ESR has doubled;
//! both thresholds are inclusive.

use crate::pso::EstimationReport;
use crate::signal::{CapacitorParams, ReferenceParams};

/// Capacitance end-of-life threshold, per unit of nominal.
pub const C_EOL_THRESHOLD_PU: f64 = 0.8;
/// ESR end-of-life threshold, per unit of initial ESR.
pub const ESR_EOL_THRESHOLD_PU: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Healthy,
    /// Capacitance at or below 80% of nominal.
    EolCapacitance,
    /// ESR at or above 200% of its initial value.
    EolEsr,
    /// Both thresholds crossed.
    EolBoth,
}

impl core::fmt::Display for Verdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Verdict::Healthy => "healthy",
            Verdict::EolCapacitance => "eol_capacitance",
            Verdict::EolEsr => "eol_esr",
            Verdict::EolBoth => "eol_both",
        })
    }
}

/// Estimates expressed per unit of the reference, with the verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HealthStatus {
    /// Estimated capacitance / nominal capacitance.
    pub c_pu: f64,
    /// Estimated ESR / initial ESR.
    pub esr_pu: f64,
    pub c_eol: bool,
    pub esr_eol: bool,
    pub verdict: Verdict,
}

/// Assess a median estimate against the nameplate reference.
/// The reference must be positive on both axes (`ReferenceParams::is_valid`).
pub fn assess_params(params: &CapacitorParams, reference: &ReferenceParams) -> HealthStatus {
    let c_pu = params.c / reference.c0;
    let esr_pu = params.esr / reference.esr0;
    let c_eol = c_pu <= C_EOL_THRESHOLD_PU;
    let esr_eol = esr_pu >= ESR_EOL_THRESHOLD_PU;
    let verdict = match (c_eol, esr_eol) {
        (false, false) => Verdict::Healthy,
        (true, false) => Verdict::EolCapacitance,
        (false, true) => Verdict::EolEsr,
        (true, true) => Verdict::EolBoth,
    };
    HealthStatus {
        c_pu,
        esr_pu,
        c_eol,
        esr_eol,
        verdict,
    }
}

/// Assess an estimation report by its median estimates.
pub fn assess(report: &EstimationReport, reference: &ReferenceParams) -> HealthStatus {
    assess_params(
        &CapacitorParams::new(report.c_median, report.esr_median),
        reference,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const REF: ReferenceParams = ReferenceParams::new(2.2e-3, 0.040);

    fn verdict_of(c_pu: f64, esr_pu: f64) -> Verdict {
        let params = CapacitorParams::new(c_pu * REF.c0, esr_pu * REF.esr0);
        assess_params(&params, &REF).verdict
    }

    #[test]
    fn nominal_capacitor_is_healthy() {
        let status = assess_params(&CapacitorParams::new(2.2e-3, 0.040), &REF);
        assert_eq!(status.verdict, Verdict::Healthy);
        assert_eq!(status.c_pu, 1.0);
        assert_eq!(status.esr_pu, 1.0);
        assert!(!status.c_eol && !status.esr_eol);
    }

    #[test]
    fn worn_capacitance_trips_eol() {
        assert_eq!(verdict_of(0.79, 1.2), Verdict::EolCapacitance);
    }

    #[test]
    fn risen_esr_trips_eol() {
        assert_eq!(verdict_of(0.95, 2.1), Verdict::EolEsr);
    }

    #[test]
    fn both_axes_degraded() {
        assert_eq!(verdict_of(0.75, 2.5), Verdict::EolBoth);
    }

    #[test]
    fn thresholds_are_inclusive() {
        assert_eq!(verdict_of(0.8, 1.0), Verdict::EolCapacitance);
        assert_eq!(verdict_of(1.0, 2.0), Verdict::EolEsr);
        assert_eq!(verdict_of(0.8, 2.0), Verdict::EolBoth);
    }

    #[test]
    fn just_inside_thresholds_is_healthy() {
        assert_eq!(verdict_of(0.801, 1.999), Verdict::Healthy);
    }

    #[test]
    fn report_medians_drive_the_verdict() {
        let report = EstimationReport {
            window_id: alloc::string::String::new(),
            per_repeat: alloc::vec::Vec::new(),
            c_median: 1.70e-3,
            esr_median: 0.085,
            c_iqr_pct: 0.1,
            esr_iqr_pct: 1.0,
        };
        let status = assess(&report, &REF);
        assert_eq!(status.verdict, Verdict::EolBoth);
        assert!((status.c_pu - 1.70 / 2.2).abs() < 1e-12);
        assert!((status.esr_pu - 2.125).abs() < 1e-12);
    }
}
