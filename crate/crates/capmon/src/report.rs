//! Versioned machine-readable artifacts: the estimation report JSON, the
//! assessment detail JSON, and the CSV rows of the sweep and boxplot
//! exports.
//!
//! All JSON artifacts carry `schema_version` and `tool_version`, never
//! timestamps, and serialize fields in a fixed order, so a rerun with the
//! same inputs and seed produces byte-identical files.

use std::fs;
use std::io::Write;
use std::path::Path;

use capmon_core::pso::TerminationReason;
use capmon_core::stats::BoxplotStats;
use capmon_core::{EstimationReport, HealthStatus, RunTrace};
use serde::{Deserialize, Serialize};

use crate::config::PsoFile;
use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

pub fn tool_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// Estimation report as written to disk: the medians, the dispersion, the
/// effective config, and one entry per repeat with its convergence trace.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EstimateReportFile {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub window_id: String,
    pub window_path: String,
    /// Base seed the repeat seeds were derived from.
    pub seed: u64,
    pub warnings: Vec<String>,
    pub config: PsoFile,
    pub c_median_farads: f64,
    pub esr_median_ohms: f64,
    /// Interquartile range of the repeat estimates, percent of the median.
    pub c_iqr_pct: f64,
    pub esr_iqr_pct: f64,
    pub per_repeat: Vec<RepeatEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RepeatEntry {
    pub repeat: usize,
    /// Derived seed this repeat ran with.
    pub seed: u64,
    pub c_farads: f64,
    pub esr_ohms: f64,
    pub cost: f64,
    pub iterations: usize,
    /// `error_limit` or `max_iter`.
    pub terminated_by: String,
    /// Global best cost after each iteration.
    pub cost_history: Vec<f64>,
}

impl RepeatEntry {
    pub fn from_trace(repeat: usize, seed: u64, trace: &RunTrace) -> Self {
        Self {
            repeat,
            seed,
            c_farads: trace.global_best.c,
            esr_ohms: trace.global_best.esr,
            cost: trace.global_best_cost,
            iterations: trace.iterations,
            terminated_by: trace.terminated_by.to_string(),
            cost_history: trace.cost_history.clone(),
        }
    }

    pub fn termination(&self) -> Option<TerminationReason> {
        match self.terminated_by.as_str() {
            "error_limit" => Some(TerminationReason::ErrorLimit),
            "max_iter" => Some(TerminationReason::MaxIterations),
            _ => None,
        }
    }
}

/// Assemble the report file from an estimation run and its context.
pub fn build_report(
    window_id: &str,
    window_path: &Path,
    config: &PsoFile,
    warnings: Vec<String>,
    estimation: &EstimationReport,
) -> EstimateReportFile {
    let per_repeat = estimation
        .per_repeat
        .iter()
        .enumerate()
        .map(|(r, trace)| {
            let seed = capmon_core::seed::child_seed(config.seed, r as u64);
            RepeatEntry::from_trace(r, seed, trace)
        })
        .collect();
    EstimateReportFile {
        schema_version: SCHEMA_VERSION,
        tool_version: tool_version().to_string(),
        command: "estimate".to_string(),
        window_id: window_id.to_string(),
        window_path: window_path.display().to_string(),
        seed: config.seed,
        warnings,
        config: config.clone(),
        c_median_farads: estimation.c_median,
        esr_median_ohms: estimation.esr_median,
        c_iqr_pct: estimation.c_iqr_pct,
        esr_iqr_pct: estimation.esr_iqr_pct,
        per_repeat,
    }
}

/// Read a report JSON back, checking the schema version.
pub fn read_report(path: &Path) -> Result<EstimateReportFile> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read report: {e}")).with_path("report", path))?;
    let report: EstimateReportFile = serde_json::from_str(&text).map_err(|e| {
        CliError::validation("invalid_report", format!("malformed report JSON: {e}"))
            .with_path("report", path)
    })?;
    if report.schema_version != SCHEMA_VERSION {
        return Err(CliError::validation(
            "invalid_report",
            format!(
                "unsupported schema_version {} (this build reads {})",
                report.schema_version, SCHEMA_VERSION
            ),
        )
        .with_path("report", path));
    }
    Ok(report)
}

/// Assessment detail as printed to stdout and optionally written to disk.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AssessDetail {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub report_path: String,
    pub c0_farads: f64,
    pub esr0_ohms: f64,
    pub c_median_farads: f64,
    pub esr_median_ohms: f64,
    pub c_pu: f64,
    pub esr_pu: f64,
    pub c_eol: bool,
    pub esr_eol: bool,
    pub verdict: String,
}

pub fn build_assess_detail(
    report_path: &Path,
    report: &EstimateReportFile,
    c0: f64,
    esr0: f64,
    status: &HealthStatus,
) -> AssessDetail {
    AssessDetail {
        schema_version: SCHEMA_VERSION,
        tool_version: tool_version().to_string(),
        command: "assess".to_string(),
        report_path: report_path.display().to_string(),
        c0_farads: c0,
        esr0_ohms: esr0,
        c_median_farads: report.c_median_farads,
        esr_median_ohms: report.esr_median_ohms,
        c_pu: status.c_pu,
        esr_pu: status.esr_pu,
        c_eol: status.c_eol,
        esr_eol: status.esr_eol,
        verdict: status.verdict.to_string(),
    }
}

/// One sweep output row: the distribution of single-run estimates at one
/// parameter value. IQR percentages are relative to that value's median.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepRow {
    pub param: String,
    pub value: String,
    pub runs: usize,
    pub c_median_farads: f64,
    pub c_q1_farads: f64,
    pub c_q3_farads: f64,
    pub c_iqr_pct: f64,
    pub esr_median_ohms: f64,
    pub esr_q1_ohms: f64,
    pub esr_q3_ohms: f64,
    pub esr_iqr_pct: f64,
}

/// One boxplot export row, a five-number summary of one report's repeat
/// estimates.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BoxplotRow {
    pub id: String,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub whisker_lo: f64,
    pub whisker_hi: f64,
    pub n_outliers: usize,
}

impl BoxplotRow {
    pub fn new(id: String, stats: &BoxplotStats) -> Self {
        Self {
            id,
            median: stats.median,
            q1: stats.q1,
            q3: stats.q3,
            whisker_lo: stats.whisker_lo,
            whisker_hi: stats.whisker_hi,
            n_outliers: stats.outliers.len(),
        }
    }
}

/// Write serde-serializable rows as CSV with a header row taken from the
/// struct's field names.
pub fn write_csv_rows<W: Write, T: Serialize>(out: W, rows: &[T]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}
