//! Generate a synthetic window, estimate its capacitor parameters, and
//! assess health against the nameplate values.
//!
//! Run with `cargo run --release --example estimate_window`.

use capmon_core::{estimate, generate_window, health, PsoConfig, ReferenceParams, ScenarioConfig};

fn main() {
    let scenario = ScenarioConfig::default();
    let (window, truth) = generate_window(&scenario).expect("default scenario is valid");

    let config = PsoConfig::default();
    let report = estimate(&window, &config).expect("default config on a valid window");

    println!(
        "truth:    C = {:.6} mF, ESR = {:.4} mOhm",
        truth.c * 1e3,
        truth.esr * 1e3
    );
    println!(
        "estimate: C = {:.6} mF, ESR = {:.4} mOhm  ({} repeats)",
        report.c_median * 1e3,
        report.esr_median * 1e3,
        report.per_repeat.len()
    );
    println!(
        "error:    C {:+.3}%, ESR {:+.3}%",
        100.0 * (report.c_median - truth.c) / truth.c,
        100.0 * (report.esr_median - truth.esr) / truth.esr
    );
    println!(
        "spread:   C IQR {:.3}%, ESR IQR {:.3}% of the medians",
        report.c_iqr_pct, report.esr_iqr_pct
    );

    let reference = ReferenceParams::new(truth.c, truth.esr);
    let status = health::assess(&report, &reference);
    println!(
        "health:   C {:.4} p.u., ESR {:.4} p.u. -> {}",
        status.c_pu, status.esr_pu, status.verdict
    );
}
