//! Acceptance gate: one test per shipping criterion.
//!
//! Each test prints a `[acceptance] criterion N ...: PASS/FAIL` line with
//! the measured values before asserting, so a `--nocapture` run shows the
//! whole scorecard and a failure always carries its numbers.

use std::process::Command;
use std::time::Instant;

use capmon_core::seed::child_seed;
use capmon_core::{
    estimate, evaluate, generate_window, health, run_once, stats, CapacitorParams, PsoConfig,
    SamplingWindow, ScenarioConfig, Verdict,
};

const TRUTH_C: f64 = 2.2e-3;
const TRUTH_ESR: f64 = 0.040;

fn reference_scenario() -> ScenarioConfig {
    let cfg = ScenarioConfig::default();
    assert_eq!(cfg.truth, CapacitorParams::new(TRUTH_C, TRUTH_ESR));
    assert_eq!(cfg.noise_sigma_v, 0.0);
    assert_eq!(cfg.noise_sigma_i, 0.0);
    cfg
}

fn noise_free_window() -> SamplingWindow {
    generate_window(&reference_scenario())
        .expect("valid scenario")
        .0
}

/// Signed error of `est` relative to `truth`, in percent.
fn pct_err(est: f64, truth: f64) -> f64 {
    100.0 * (est / truth - 1.0)
}

/// IQR of `values` as a percentage of `reference`.
fn iqr_pct(values: &[f64], reference: f64) -> f64 {
    stats::boxplot_stats(values, reference)
        .expect("nonempty values, positive reference")
        .iqr_pct
}

fn label(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

#[test]
fn criterion_1_truth_recovery_healthy() {
    let window = noise_free_window();
    let start = Instant::now();
    let report = estimate(&window, &PsoConfig::default()).expect("valid window and config");
    let elapsed = start.elapsed().as_secs_f64();

    let c_err = pct_err(report.c_median, TRUTH_C);
    let esr_err = pct_err(report.esr_median, TRUTH_ESR);
    let pass = c_err.abs() <= 1.0 && esr_err.abs() <= 10.0 && elapsed <= 10.0;
    println!(
        "[acceptance] criterion 1 (truth recovery, healthy): {} - median C err {:.3}% (limit 1%), \
         median ESR err {:.3}% (limit 10%), {:.2} s (limit 10 s)",
        label(pass),
        c_err,
        esr_err,
        elapsed
    );
    assert!(
        pass,
        "median C err {c_err:.3}%, median ESR err {esr_err:.3}%, {elapsed:.2} s"
    );
}

#[test]
fn criterion_2_truth_recovery_degradation_grid() {
    let c_grid = [1.0, 0.95, 0.9, 0.85, 0.8];
    let esr_grid = [1.0, 1.25, 1.5, 1.75, 2.0];
    let start = Instant::now();
    let mut worst_c: f64 = 0.0;
    let mut worst_esr: f64 = 0.0;
    let mut failures = Vec::new();
    for c_pu in c_grid {
        for esr_pu in esr_grid {
            let mut scenario = reference_scenario();
            scenario.truth = CapacitorParams::new(c_pu * TRUTH_C, esr_pu * TRUTH_ESR);
            let (window, truth) = generate_window(&scenario).expect("valid scenario");
            let report = estimate(&window, &PsoConfig::default()).expect("valid window");
            let c_err = pct_err(report.c_median, truth.c);
            let esr_err = pct_err(report.esr_median, truth.esr);
            worst_c = worst_c.max(c_err.abs());
            worst_esr = worst_esr.max(esr_err.abs());
            if c_err.abs() > 1.0 || esr_err.abs() > 10.0 {
                failures.push(format!(
                    "({c_pu}, {esr_pu}) p.u.: C err {c_err:.3}%, ESR err {esr_err:.3}%"
                ));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = failures.is_empty() && elapsed <= 300.0;
    println!(
        "[acceptance] criterion 2 (degradation grid, 25 truths): {} - worst |C err| {:.3}% \
         (limit 1%), worst |ESR err| {:.3}% (limit 10%), {:.1} s (limit 300 s)",
        label(pass),
        worst_c,
        worst_esr,
        elapsed
    );
    assert!(pass, "out-of-band cells: {failures:?}, {elapsed:.1} s");
}

#[test]
fn criterion_3_voltage_prediction_fidelity() {
    let window = noise_free_window();
    let report = estimate(&window, &PsoConfig::default()).expect("valid window");
    let estimated = CapacitorParams::new(report.c_median, report.esr_median);

    let prediction = evaluate(&window, &estimated).expect("valid params");
    let max_abs_err = prediction
        .inst_err
        .iter()
        .fold(0.0f64, |m, e| m.max(e.abs()));
    let mean_v = window.v_sm.iter().sum::<f64>() / window.len() as f64;
    let err_pct = 100.0 * max_abs_err / mean_v;

    let pass = err_pct <= 0.1;
    println!(
        "[acceptance] criterion 3 (prediction fidelity): {} - max |inst err| {:.4}% of mean \
         voltage (limit 0.1%)",
        label(pass),
        err_pct
    );
    assert!(pass, "max |inst err| {err_pct:.4}% of mean voltage");
}

#[test]
fn criterion_4_eol_verdict_coverage() {
    let reference = capmon_core::ReferenceParams::new(TRUTH_C, TRUTH_ESR);
    let verdict_of = |c_pu: f64, esr_pu: f64| {
        let params = CapacitorParams::new(c_pu * TRUTH_C, esr_pu * TRUTH_ESR);
        health::assess_params(&params, &reference).verdict
    };
    let cases = [
        (0.95, 2.0, Verdict::EolEsr),
        (0.8, 1.2, Verdict::EolCapacitance),
        (1.0, 1.0, Verdict::Healthy),
    ];
    let mut failures = Vec::new();
    for (c_pu, esr_pu, expected) in cases {
        let got = verdict_of(c_pu, esr_pu);
        if got != expected {
            failures.push(format!(
                "({c_pu}, {esr_pu}) p.u. -> {got:?}, expected {expected:?}"
            ));
        }
    }

    // The healthy truth sits well inside both thresholds, so the full
    // estimate-then-assess path must agree with the direct mapping.
    let window = noise_free_window();
    let report = estimate(&window, &PsoConfig::default()).expect("valid window");
    let end_to_end = health::assess(&report, &reference).verdict;
    if end_to_end != Verdict::Healthy {
        failures.push(format!("estimated (1.0, 1.0) p.u. -> {end_to_end:?}"));
    }

    let pass = failures.is_empty();
    println!(
        "[acceptance] criterion 4 (EOL verdict coverage): {} - eol_esr/eol_capacitance/healthy \
         mapped exactly, estimated healthy window assessed healthy",
        label(pass)
    );
    assert!(pass, "verdict mismatches: {failures:?}");
}

#[test]
fn criterion_5_swarm_size_iqr_ordering() {
    let window = noise_free_window();
    let start = Instant::now();
    let esr_iqr_of = |swarm_size: usize, value_index: u64| {
        let config = PsoConfig {
            swarm_size,
            ..PsoConfig::default()
        };
        let value_seed = child_seed(config.seed, value_index);
        let esr: Vec<f64> = (0..100)
            .map(|r| {
                run_once(&window, &config, child_seed(value_seed, r))
                    .expect("valid window")
                    .global_best
                    .esr
            })
            .collect();
        iqr_pct(&esr, TRUTH_ESR)
    };
    let iqr_5 = esr_iqr_of(5, 0);
    let iqr_10 = esr_iqr_of(10, 1);
    let elapsed = start.elapsed().as_secs_f64();

    let pass = iqr_10 < iqr_5 && elapsed <= 600.0;
    println!(
        "[acceptance] criterion 5 (swarm-size IQR ordering): {} - ESR IQR {:.2}% at swarm 10 < \
         {:.2}% at swarm 5, {:.1} s (limit 600 s)",
        label(pass),
        iqr_10,
        iqr_5,
        elapsed
    );
    assert!(
        pass,
        "ESR IQR at swarm 10: {iqr_10:.2}%, at swarm 5: {iqr_5:.2}%, {elapsed:.1} s"
    );
}

#[test]
fn criterion_6_error_limit_dispersion() {
    let window = noise_free_window();
    let run_batch = |error_limit: f64, value_index: u64| {
        let config = PsoConfig {
            error_limit,
            ..PsoConfig::default()
        };
        let value_seed = child_seed(config.seed, value_index);
        let mut c = Vec::with_capacity(100);
        let mut esr = Vec::with_capacity(100);
        for r in 0..100 {
            let trace =
                run_once(&window, &config, child_seed(value_seed, r)).expect("valid window");
            c.push(trace.global_best.c);
            esr.push(trace.global_best.esr);
        }
        (iqr_pct(&c, TRUTH_C), iqr_pct(&esr, TRUTH_ESR))
    };
    let (c_tight, esr_tight) = run_batch(1e-6, 0);
    let (_, esr_loose) = run_batch(1e-3, 1);

    let pass = c_tight <= 0.38 && esr_tight <= 7.72 && esr_loose > esr_tight;
    println!(
        "[acceptance] criterion 6 (error-limit study): {} - at 1e-6 C IQR {:.3}% (limit 0.38%), \
         ESR IQR {:.2}% (limit 7.72%); at 1e-3 ESR IQR {:.2}% (> {:.2}%)",
        label(pass),
        c_tight,
        esr_tight,
        esr_loose,
        esr_tight
    );
    assert!(
        pass,
        "C IQR {c_tight:.3}%, ESR IQR {esr_tight:.2}% at 1e-6; ESR IQR {esr_loose:.2}% at 1e-3"
    );
}

#[test]
fn criterion_7_grid_oracle_equivalence() {
    let window = noise_free_window();
    let config = PsoConfig {
        // Zero limit exhausts the iteration budget; the default 1e-6 limit
        // can stop above the grid floor, which sits near 4e-7.
        error_limit: 0.0,
        ..PsoConfig::default()
    };

    const GRID: usize = 200;
    let (c_lo, c_hi) = config.bounds_c;
    let (esr_lo, esr_hi) = config.bounds_esr;
    let mut grid_best = f64::INFINITY;
    for i in 0..GRID {
        let c = c_lo + (c_hi - c_lo) * i as f64 / (GRID - 1) as f64;
        for j in 0..GRID {
            let esr = esr_lo + (esr_hi - esr_lo) * j as f64 / (GRID - 1) as f64;
            let cost = capmon_core::cost(&window, &CapacitorParams::new(c, esr))
                .expect("valid window and params");
            if cost < grid_best {
                grid_best = cost;
            }
        }
    }

    let mut failures = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    for seed in 1..=10u64 {
        let trace = run_once(&window, &config, seed).expect("valid window");
        worst = worst.max(trace.global_best_cost);
        if trace.global_best_cost > grid_best {
            failures.push(format!(
                "seed {seed}: swarm {:.3e} > grid {grid_best:.3e}",
                trace.global_best_cost
            ));
        }
    }

    let pass = failures.is_empty();
    println!(
        "[acceptance] criterion 7 (grid-oracle equivalence): {} - worst swarm best {:.3e} <= \
         200x200 grid best {:.3e} on 10 seeds",
        label(pass),
        worst,
        grid_best
    );
    assert!(pass, "seeds beaten by the grid: {failures:?}");
}

#[test]
fn criterion_8_determinism_byte_identical_reports() {
    let dir = tempfile::tempdir().expect("tempdir");
    let window = dir.path().join("window.csv");
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    let bin = env!("CARGO_BIN_EXE_capmon");

    let run = |args: &[&str]| {
        let output = Command::new(bin).args(args).output().expect("spawn capmon");
        assert!(
            output.status.success(),
            "capmon {args:?} failed: {}",
            String::from_utf8_lossy(&output.stderr)
        );
    };
    run(&["simulate", "--out", window.to_str().unwrap()]);
    for out in [&first, &second] {
        run(&[
            "estimate",
            "--window",
            window.to_str().unwrap(),
            "--seed",
            "20260823",
            "--out",
            out.to_str().unwrap(),
        ]);
    }

    let a = std::fs::read(&first).expect("first report");
    let b = std::fs::read(&second).expect("second report");
    let pass = a == b;
    println!(
        "[acceptance] criterion 8 (determinism): {} - two estimate invocations with one seed \
         wrote byte-identical report JSON ({} bytes)",
        label(pass),
        a.len()
    );
    assert!(pass, "reports differ");
}

#[test]
fn criterion_9_noise_robustness() {
    let clean = noise_free_window();
    let v_m = clean.v_sm.iter().fold(0.0f64, |m, v| m.max(*v));
    let peak_i = clean.i_arm.iter().fold(0.0f64, |m, i| m.max(i.abs()));

    let mut scenario = reference_scenario();
    scenario.noise_sigma_v = 0.001 * v_m;
    scenario.noise_sigma_i = 0.01 * peak_i;
    let (window, truth) = generate_window(&scenario).expect("valid scenario");
    let report = estimate(&window, &PsoConfig::default()).expect("valid window");

    let c_err = pct_err(report.c_median, truth.c);
    let esr_err = pct_err(report.esr_median, truth.esr);
    let pass = c_err.abs() <= 3.0 && esr_err.abs() <= 10.0;
    println!(
        "[acceptance] criterion 9 (noise robustness): {} - sigma_v {:.4} V, sigma_i {:.3} A; \
         median C err {:.3}% (limit 3%), median ESR err {:.3}% (limit 10%)",
        label(pass),
        scenario.noise_sigma_v,
        scenario.noise_sigma_i,
        c_err,
        esr_err
    );
    assert!(
        pass,
        "median C err {c_err:.3}%, median ESR err {esr_err:.3}%"
    );
}
