//! Window and prediction CSV formats.
//!
//! A window file is UTF-8 CSV with the exact header `t,v_sm,v_sw,i_arm`
//! and one row per sample, `.` as the decimal separator. The time column
//! must increase strictly with a constant step; each consecutive
//! difference may deviate from the first by at most one part per million.
//! The sample period is reconstructed from the first step, the start time
//! from the first row.

use std::io::Write;
use std::path::Path;

use capmon_core::{PredictionResult, SamplingWindow};

use crate::error::{CliError, Result};

const WINDOW_HEADER: [&str; 4] = ["t", "v_sm", "v_sw", "i_arm"];
const STEP_TOLERANCE: f64 = 1e-6;

/// Read a window CSV. Structural problems (header, field count, unparsable
/// numbers, non-uniform time) are reported here with the offending line;
/// value-level violations (non-binary switching state, NaN samples) are
/// left to window validation so they carry the validator's vocabulary.
pub fn read_window(path: &Path) -> Result<SamplingWindow> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CliError::io(format!("cannot read window: {e}")).with_path("window", path))?;

    let headers = reader
        .headers()
        .map_err(|e| CliError::io(format!("cannot read window: {e}")).with_path("window", path))?;
    if headers != WINDOW_HEADER.as_slice() {
        return Err(CliError::validation(
            "invalid_window",
            format!("window CSV header must be `{}`", WINDOW_HEADER.join(",")),
        )
        .with("found", headers.iter().collect::<Vec<_>>().join(","))
        .with_path("window", path));
    }

    let mut t = Vec::new();
    let mut v_sm = Vec::new();
    let mut v_sw = Vec::new();
    let mut i_arm = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| {
            CliError::validation("invalid_window", format!("malformed CSV record: {e}"))
                .with("line", line)
                .with_path("window", path)
        })?;
        if record.len() != WINDOW_HEADER.len() {
            return Err(CliError::validation(
                "invalid_window",
                format!(
                    "expected {} fields, found {}",
                    WINDOW_HEADER.len(),
                    record.len()
                ),
            )
            .with("line", line)
            .with_path("window", path));
        }
        let mut fields = [0.0f64; 4];
        for (f, (name, raw)) in fields.iter_mut().zip(WINDOW_HEADER.iter().zip(&record)) {
            *f = raw.trim().parse().map_err(|_| {
                CliError::validation(
                    "invalid_window",
                    format!("column `{name}` is not a number: `{raw}`"),
                )
                .with("line", line)
                .with_path("window", path)
            })?;
        }
        t.push(fields[0]);
        v_sm.push(fields[1]);
        v_sw.push(fields[2]);
        i_arm.push(fields[3]);
    }

    if t.len() < 2 {
        return Err(
            CliError::validation("invalid_window", "window has fewer than two samples")
                .with_path("window", path),
        );
    }

    let ts = t[1] - t[0];
    if !(ts > 0.0 && ts.is_finite()) {
        return Err(step_error(path, 2, ts, ts));
    }
    for k in 2..t.len() {
        let dt = t[k] - t[k - 1];
        // `uniform` is false for a NaN time value too, not only a drifted step.
        let uniform = dt.is_finite() && (dt - ts).abs() <= STEP_TOLERANCE * ts;
        if !uniform {
            return Err(step_error(path, k + 2, ts, dt));
        }
    }

    Ok(SamplingWindow {
        t0: t[0],
        ts,
        v_sm,
        v_sw,
        i_arm,
    })
}

fn step_error(path: &Path, line: usize, ts: f64, dt: f64) -> CliError {
    CliError::validation(
        "invalid_window",
        "time column must increase strictly with a constant step",
    )
    .with("line", line)
    .with("expected_step", ts)
    .with("found_step", dt)
    .with_path("window", path)
}

/// Write a window in the same format `read_window` accepts. Floats are
/// printed with the shortest representation that parses back to the
/// identical value, so write -> read is lossless.
pub fn write_window<W: Write>(out: W, window: &SamplingWindow) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(WINDOW_HEADER)?;
    for k in 0..window.len() {
        w.write_record([
            window.time_at(k).to_string(),
            window.v_sm[k].to_string(),
            window.v_sw[k].to_string(),
            window.i_arm[k].to_string(),
        ])?;
    }
    w.flush()
}

/// Write a prediction replay: measured and predicted voltage plus the
/// instantaneous error, one row per sample.
pub fn write_prediction<W: Write>(
    out: W,
    window: &SamplingWindow,
    prediction: &PredictionResult,
) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "v_sm", "v_hat", "err"])?;
    for k in 0..window.len() {
        w.write_record([
            window.time_at(k).to_string(),
            window.v_sm[k].to_string(),
            prediction.v_hat[k].to_string(),
            prediction.inst_err[k].to_string(),
        ])?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_window() -> SamplingWindow {
        SamplingWindow {
            t0: 0.0,
            ts: 1e-5,
            v_sm: vec![8.0, 8.25, 8.5, 8.125],
            v_sw: vec![0.0, 1.0, 1.0, 0.0],
            i_arm: vec![-8.0, 12.5, 20.0, 3.5],
        }
    }

    fn write_temp(contents: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(contents.as_bytes()).unwrap();
        file
    }

    #[test]
    fn window_roundtrips_exactly() {
        let window = sample_window();
        let mut buf = Vec::new();
        write_window(&mut buf, &window).unwrap();
        let file = write_temp(std::str::from_utf8(&buf).unwrap());
        let read = read_window(file.path()).unwrap();
        assert_eq!(read, window);
    }

    #[test]
    fn nonzero_start_time_is_accepted() {
        let file = write_temp("t,v_sm,v_sw,i_arm\n0.5,8,1,2\n0.50001,8.1,1,2\n0.50002,8.2,0,2\n");
        let read = read_window(file.path()).unwrap();
        assert_eq!(read.t0, 0.5);
        assert!((read.ts - 1e-5).abs() < 1e-12);
    }

    #[test]
    fn wrong_header_is_rejected() {
        let file = write_temp("time,v_sm,v_sw,i_arm\n0,8,1,2\n1,8,1,2\n");
        let err = read_window(file.path()).unwrap_err();
        assert_eq!(err.code, "invalid_window");
        assert_eq!(err.exit_code, 2);
        assert!(err.message.contains("header"));
    }

    #[test]
    fn nonuniform_step_is_rejected() {
        let file = write_temp("t,v_sm,v_sw,i_arm\n0,8,1,2\n1,8,1,2\n2.5,8,1,2\n");
        let err = read_window(file.path()).unwrap_err();
        assert_eq!(err.code, "invalid_window");
        assert_eq!(err.context["line"], 4);
    }

    #[test]
    fn step_within_one_ppm_is_accepted() {
        let file = write_temp("t,v_sm,v_sw,i_arm\n0,8,1,2\n1,8,1,2\n2.0000005,8,1,2\n");
        assert!(read_window(file.path()).is_ok());
        let file = write_temp("t,v_sm,v_sw,i_arm\n0,8,1,2\n1,8,1,2\n2.000002,8,1,2\n");
        assert!(read_window(file.path()).is_err());
    }

    #[test]
    fn decreasing_time_is_rejected() {
        let file = write_temp("t,v_sm,v_sw,i_arm\n1,8,1,2\n0,8,1,2\n");
        let err = read_window(file.path()).unwrap_err();
        assert_eq!(err.code, "invalid_window");
    }

    #[test]
    fn non_numeric_field_is_rejected_with_line() {
        let file = write_temp("t,v_sm,v_sw,i_arm\n0,8,1,2\n1,eight,1,2\n");
        let err = read_window(file.path()).unwrap_err();
        assert_eq!(err.code, "invalid_window");
        assert_eq!(err.context["line"], 3);
        assert!(err.message.contains("v_sm"));
    }

    #[test]
    fn nan_parses_and_is_left_to_validation() {
        let file = write_temp("t,v_sm,v_sw,i_arm\n0,NaN,1,2\n1,8,1,2\n");
        let window = read_window(file.path()).unwrap();
        assert!(window.v_sm[0].is_nan());
        assert!(!window.validate().is_ok());
    }

    #[test]
    fn single_row_is_rejected() {
        let file = write_temp("t,v_sm,v_sw,i_arm\n0,8,1,2\n");
        let err = read_window(file.path()).unwrap_err();
        assert!(err.message.contains("fewer than two"));
    }

    #[test]
    fn prediction_rows_align_with_the_window() {
        let window = sample_window();
        let prediction =
            capmon_core::evaluate(&window, &capmon_core::CapacitorParams::new(2.2e-3, 0.040))
                .unwrap();
        let mut buf = Vec::new();
        write_prediction(&mut buf, &window, &prediction).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,v_sm,v_hat,err");
        assert_eq!(lines.len(), 1 + window.len());
        assert!(lines[1].starts_with("0,8,8,0"));
    }
}
