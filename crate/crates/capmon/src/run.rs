//! Command orchestration: path validation, dispatch, atomic output
//! writing, and the stdout summaries.
//!
//! Every command validates its paths up front, does its work, writes each
//! output through a temp-file-plus-rename so no partial artifact can be
//! observed, and prints one JSON summary (manifest, warnings, result) to
//! stdout. `assess` instead prints its verdict line followed by the
//! assessment detail, as its contract fixes that shape.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process;

use capmon_core::seed::child_seed;
use capmon_core::{
    estimate, evaluate, generate_window, health, run_once, stats, validate_window, CapacitorParams,
    EstimateError, PredictError, PsoConfig, ReferenceParams, SamplingWindow, ScenarioError,
};
use serde::Serialize;
use serde_json::json;

use crate::cli::{
    AssessArgs, Cli, Command, EstimateArgs, PredictArgs, ReportArgs, ReportParam, SimulateArgs,
    SweepArgs, SweepParam,
};
use crate::config::{self, PsoFile, ScenarioFile};
use crate::csvio;
use crate::error::{CliError, Result};
use crate::report::{
    build_assess_detail, build_report, read_report, tool_version, write_csv_rows, BoxplotRow,
    SweepRow,
};

/// What a command ran with, echoed to stdout on success.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub config_path: Option<String>,
    pub input_paths: Vec<String>,
    pub output_paths: Vec<String>,
    /// Effective base seed for randomized commands, null for the rest.
    pub seed: Option<u64>,
    pub tool_version: String,
}

impl RunManifest {
    fn new(command: &'static str) -> Self {
        Self {
            command,
            config_path: None,
            input_paths: Vec::new(),
            output_paths: Vec::new(),
            seed: None,
            tool_version: tool_version().to_string(),
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Predict(args) => predict(args),
        Command::Estimate(args) => estimate_cmd(args),
        Command::Sweep(args) => sweep(args),
        Command::Assess(args) => assess(args),
        Command::Report(args) => report_cmd(args),
    }
}

// ---- path plumbing ----

fn display(path: &Path) -> String {
    path.display().to_string()
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "window".to_string())
}

fn parent_dir(path: &Path) -> PathBuf {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

fn check_input(path: &Path, role: &'static str) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(
            CliError::validation("invalid_args", format!("{role} path does not exist"))
                .with_path(role, path),
        )
    }
}

/// The output's directory must exist, and the output must not be one of
/// the inputs: no command mutates what it reads.
fn check_output(path: &Path, inputs: &[&Path]) -> Result<()> {
    let parent = parent_dir(path);
    if !parent.is_dir() {
        return Err(
            CliError::validation("invalid_args", "output directory does not exist")
                .with_path("out", path),
        );
    }
    if let (Some(name), Ok(canonical_parent)) = (path.file_name(), fs::canonicalize(&parent)) {
        let out = canonical_parent.join(name);
        for input in inputs {
            if fs::canonicalize(input).is_ok_and(|i| i == out) {
                return Err(CliError::validation(
                    "invalid_args",
                    "output path would overwrite an input",
                )
                .with_path("out", path));
            }
        }
    }
    Ok(())
}

/// Write an output via a temp file in the target directory and an atomic
/// rename, so an interrupted run never leaves a partial artifact.
fn atomic_write(path: &Path, write: impl FnOnce(&mut fs::File) -> io::Result<()>) -> Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(parent_dir(path)).map_err(|e| {
        CliError::io(format!("cannot create temporary file: {e}")).with_path("out", path)
    })?;
    write(tmp.as_file_mut())
        .map_err(|e| CliError::io(format!("cannot write output: {e}")).with_path("out", path))?;
    tmp.persist(path)
        .map_err(|e| CliError::io(format!("cannot finalize output: {e}")).with_path("out", path))?;
    Ok(())
}

fn write_json<T: Serialize>(f: &mut fs::File, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *f, value)?;
    writeln!(f)
}

/// Print one line to stdout. A closed pipe (e.g. the output piped into
/// `head`) ends the program quietly instead of panicking.
fn emit_line(text: impl fmt::Display) {
    let mut out = io::stdout().lock();
    if let Err(e) = writeln!(out, "{text}") {
        if e.kind() == io::ErrorKind::BrokenPipe {
            process::exit(0);
        }
    }
}

fn print_summary(manifest: &RunManifest, warnings: &[String], result: serde_json::Value) {
    #[derive(Serialize)]
    struct Summary<'a> {
        manifest: &'a RunManifest,
        warnings: &'a [String],
        result: serde_json::Value,
    }
    let summary = Summary {
        manifest,
        warnings,
        result,
    };
    emit_line(serde_json::to_string_pretty(&summary).expect("summary serializes"));
}

// ---- shared window handling ----

/// Reject an invalid window with the validator's first violation (all of
/// them in the context), or hand back the warning strings.
fn reject_violations(window: &SamplingWindow, path: &Path) -> Result<Vec<String>> {
    let report = validate_window(window);
    if let Some(first) = report.first_violation() {
        let all: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(CliError::validation("invalid_window", first)
            .with("violations", all)
            .with_path("window", path));
    }
    Ok(report.warnings.iter().map(|w| w.to_string()).collect())
}

fn enforce_strict(strict: bool, warnings: &[String], window_path: &Path) -> Result<()> {
    if strict {
        if let Some(warning) = warnings.first() {
            return Err(CliError::esr_unobservable(warning).with_path("window", window_path));
        }
    }
    Ok(())
}

fn load_or_default(path: &Option<PathBuf>) -> Result<PsoFile> {
    match path {
        Some(p) => config::load(p),
        None => Ok(PsoFile::default()),
    }
}

fn map_estimate_error(e: EstimateError, config_path: Option<&Path>) -> CliError {
    let code = match e {
        EstimateError::InvalidConfig(_) => "invalid_config",
        EstimateError::InvalidWindow(_) => "invalid_window",
    };
    let err = CliError::validation(code, e);
    match config_path {
        Some(p) => err.with_path("config", p),
        None => err,
    }
}

// ---- commands ----

fn simulate(args: SimulateArgs) -> Result<()> {
    if let Some(config_path) = &args.config {
        check_input(config_path, "config")?;
    }
    check_output(
        &args.out,
        &args.config.iter().map(PathBuf::as_path).collect::<Vec<_>>(),
    )?;

    let mut scenario: ScenarioFile = match &args.config {
        Some(path) => config::load(path)?,
        None => ScenarioFile::default(),
    };
    if let Some(seed) = args.seed {
        scenario.seed = seed;
    }

    let (window, _truth) = generate_window(&scenario.to_core()).map_err(|e: ScenarioError| {
        let err = CliError::validation("invalid_config", e);
        match &args.config {
            Some(p) => err.with_path("config", p),
            None => err,
        }
    })?;
    atomic_write(&args.out, |f| csvio::write_window(f, &window))?;

    let warnings: Vec<String> = validate_window(&window)
        .warnings
        .iter()
        .map(|w| w.to_string())
        .collect();
    let manifest = RunManifest {
        config_path: args.config.as_deref().map(display),
        output_paths: vec![display(&args.out)],
        seed: Some(scenario.seed),
        ..RunManifest::new("simulate")
    };
    print_summary(
        &manifest,
        &warnings,
        json!({
            "samples": window.len(),
            "switching_transitions": window.switching_transitions(),
        }),
    );
    Ok(())
}

fn predict(args: PredictArgs) -> Result<()> {
    check_input(&args.window, "window")?;
    check_output(&args.out, &[&args.window])?;

    let window = csvio::read_window(&args.window)?;
    let warnings = reject_violations(&window, &args.window)?;

    let params = CapacitorParams::new(args.c, args.esr);
    let prediction = evaluate(&window, &params).map_err(|e| match e {
        PredictError::NonPositiveCapacitance => CliError::validation("invalid_args", e),
        PredictError::InvalidWindow(v) => {
            CliError::validation("invalid_window", v).with_path("window", &args.window)
        }
    })?;
    atomic_write(&args.out, |f| {
        csvio::write_prediction(f, &window, &prediction)
    })?;

    let max_abs_err = prediction
        .inst_err
        .iter()
        .fold(0.0f64, |m, e| m.max(e.abs()));
    let manifest = RunManifest {
        input_paths: vec![display(&args.window)],
        output_paths: vec![display(&args.out)],
        ..RunManifest::new("predict")
    };
    print_summary(
        &manifest,
        &warnings,
        json!({
            "c_farads": args.c,
            "esr_ohms": args.esr,
            "v_err": prediction.v_err,
            "v_m_volts": prediction.v_m,
            "max_abs_err_volts": max_abs_err,
        }),
    );
    Ok(())
}

fn estimate_cmd(args: EstimateArgs) -> Result<()> {
    check_input(&args.window, "window")?;
    if let Some(config_path) = &args.config {
        check_input(config_path, "config")?;
    }
    check_output(&args.out, &[&args.window])?;

    let window = csvio::read_window(&args.window)?;
    let warnings = reject_violations(&window, &args.window)?;
    enforce_strict(args.strict, &warnings, &args.window)?;

    let mut pso = load_or_default(&args.config)?;
    if let Some(seed) = args.seed {
        pso.seed = seed;
    }
    let estimation = estimate(&window, &pso.to_core())
        .map_err(|e| map_estimate_error(e, args.config.as_deref()))?;

    let report = build_report(
        &file_stem(&args.window),
        &args.window,
        &pso,
        warnings.clone(),
        &estimation,
    );
    atomic_write(&args.out, |f| write_json(f, &report))?;

    let manifest = RunManifest {
        config_path: args.config.as_deref().map(display),
        input_paths: vec![display(&args.window)],
        output_paths: vec![display(&args.out)],
        seed: Some(pso.seed),
        ..RunManifest::new("estimate")
    };
    print_summary(
        &manifest,
        &warnings,
        json!({
            "window_id": report.window_id,
            "c_median_farads": report.c_median_farads,
            "esr_median_ohms": report.esr_median_ohms,
            "c_iqr_pct": report.c_iqr_pct,
            "esr_iqr_pct": report.esr_iqr_pct,
            "repeats": report.per_repeat.len(),
        }),
    );
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    check_input(&args.window, "window")?;
    if let Some(config_path) = &args.config {
        check_input(config_path, "config")?;
    }
    check_output(&args.out, &[&args.window])?;
    if args.runs == 0 {
        return Err(CliError::validation(
            "invalid_args",
            "--runs must be at least 1",
        ));
    }

    let window = csvio::read_window(&args.window)?;
    let warnings = reject_violations(&window, &args.window)?;
    enforce_strict(args.strict, &warnings, &args.window)?;

    let mut pso = load_or_default(&args.config)?;
    if let Some(seed) = args.seed {
        pso.seed = seed;
    }
    let base = pso.to_core();

    let mut rows = Vec::with_capacity(args.values.len());
    for (i, raw) in args.values.iter().enumerate() {
        let (label, cfg) = apply_sweep_value(&base, args.param, raw)?;
        // Nested derivation: one child per sweep value, one grandchild per
        // run, so adding values never reshuffles earlier ones.
        let value_seed = child_seed(pso.seed, i as u64);
        let mut c_values = Vec::with_capacity(args.runs);
        let mut esr_values = Vec::with_capacity(args.runs);
        for r in 0..args.runs {
            let trace = run_once(&window, &cfg, child_seed(value_seed, r as u64)).map_err(|e| {
                map_estimate_error(e, args.config.as_deref()).with("value", raw.clone())
            })?;
            c_values.push(trace.global_best.c);
            esr_values.push(trace.global_best.esr);
        }
        rows.push(sweep_row(
            args.param.key(),
            &label,
            args.runs,
            &c_values,
            &esr_values,
        ));
    }
    atomic_write(&args.out, |f| write_csv_rows(f, &rows))?;

    let manifest = RunManifest {
        config_path: args.config.as_deref().map(display),
        input_paths: vec![display(&args.window)],
        output_paths: vec![display(&args.out)],
        seed: Some(pso.seed),
        ..RunManifest::new("sweep")
    };
    print_summary(
        &manifest,
        &warnings,
        json!({
            "param": args.param.key(),
            "rows": rows.len(),
            "runs_per_value": args.runs,
        }),
    );
    Ok(())
}

fn apply_sweep_value(
    base: &PsoConfig,
    param: SweepParam,
    raw: &str,
) -> Result<(String, PsoConfig)> {
    let mut cfg = base.clone();
    let label = match param {
        SweepParam::SwarmSize => {
            let v: usize = raw.trim().parse().map_err(|_| {
                CliError::validation(
                    "invalid_args",
                    format!("swarm_size value is not a count: `{raw}`"),
                )
            })?;
            cfg.swarm_size = v;
            v.to_string()
        }
        SweepParam::ErrorLimit => {
            let v: f64 = raw.trim().parse().map_err(|_| {
                CliError::validation(
                    "invalid_args",
                    format!("error_limit value is not a number: `{raw}`"),
                )
            })?;
            cfg.error_limit = v;
            v.to_string()
        }
    };
    Ok((label, cfg))
}

fn sweep_row(param: &str, value: &str, runs: usize, c: &[f64], esr: &[f64]) -> SweepRow {
    let c_median = stats::median(c).expect("runs >= 1");
    let esr_median = stats::median(esr).expect("runs >= 1");
    // Estimates stay inside the positive search bounds, so the medians
    // are valid references.
    let c_box = stats::boxplot_stats(c, c_median).expect("positive median");
    let esr_box = stats::boxplot_stats(esr, esr_median).expect("positive median");
    SweepRow {
        param: param.to_string(),
        value: value.to_string(),
        runs,
        c_median_farads: c_median,
        c_q1_farads: c_box.q1,
        c_q3_farads: c_box.q3,
        c_iqr_pct: c_box.iqr_pct,
        esr_median_ohms: esr_median,
        esr_q1_ohms: esr_box.q1,
        esr_q3_ohms: esr_box.q3,
        esr_iqr_pct: esr_box.iqr_pct,
    }
}

fn assess(args: AssessArgs) -> Result<()> {
    check_input(&args.report, "report")?;
    if let Some(out) = &args.out {
        check_output(out, &[&args.report])?;
    }
    let reference = ReferenceParams::new(args.c0, args.esr0);
    if !reference.is_valid() {
        return Err(CliError::validation(
            "invalid_args",
            "reference values must be positive and finite",
        )
        .with("c0_farads", args.c0)
        .with("esr0_ohms", args.esr0));
    }

    let report = read_report(&args.report)?;
    let medians = CapacitorParams::new(report.c_median_farads, report.esr_median_ohms);
    let status = health::assess_params(&medians, &reference);
    let detail = build_assess_detail(&args.report, &report, args.c0, args.esr0, &status);

    if let Some(out) = &args.out {
        atomic_write(out, |f| write_json(f, &detail))?;
    }
    emit_line(status.verdict);
    emit_line(serde_json::to_string_pretty(&detail).expect("detail serializes"));
    Ok(())
}

fn report_cmd(args: ReportArgs) -> Result<()> {
    for path in &args.reports {
        check_input(path, "report")?;
    }
    let inputs: Vec<&Path> = args.reports.iter().map(PathBuf::as_path).collect();
    check_output(&args.out, &inputs)?;

    let mut rows = Vec::with_capacity(args.reports.len());
    for path in &args.reports {
        let report = read_report(path)?;
        let values: Vec<f64> = report
            .per_repeat
            .iter()
            .map(|entry| match args.param {
                ReportParam::Capacitance => entry.c_farads,
                ReportParam::Esr => entry.esr_ohms,
            })
            .collect();
        if values.is_empty() {
            return Err(
                CliError::validation("invalid_report", "report has no repeat entries")
                    .with_path("report", path),
            );
        }
        let median = stats::median(&values).expect("nonempty");
        let box_stats = stats::boxplot_stats(&values, median)
            .map_err(|e| CliError::validation("invalid_report", e).with_path("report", path))?;
        let id = if report.window_id.is_empty() {
            file_stem(path)
        } else {
            report.window_id.clone()
        };
        rows.push(BoxplotRow::new(id, &box_stats));
    }
    atomic_write(&args.out, |f| write_csv_rows(f, &rows))?;

    let manifest = RunManifest {
        input_paths: args.reports.iter().map(|p| display(p)).collect(),
        output_paths: vec![display(&args.out)],
        ..RunManifest::new("report")
    };
    let param = match args.param {
        ReportParam::Capacitance => "c",
        ReportParam::Esr => "esr",
    };
    print_summary(
        &manifest,
        &[],
        json!({
            "format": args.format,
            "param": param,
            "rows": rows.len(),
        }),
    );
    Ok(())
}
