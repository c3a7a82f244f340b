//! Particle-swarm search over (capacitance, ESR), plus the repeat-and-median
//! outer loop that turns stochastic runs into one estimate.
//!
//! Each particle carries a position and velocity updated per iteration as
//!
//! ```text
//! v <- w * v + c1 * r1 * (best_own - x) + c2 * r2 * (best_global - x)
//! x <- x + v
//! ```
//!
//! with r1, r2 drawn uniformly from [0, 1) once per particle per iteration
//! and the inertia `w` decreasing linearly over the iteration budget.
//! Internally both axes are mapped onto [0, 1] spanned by the search
//! bounds, so one velocity limit and one boundary rule serve capacitance
//! (millifarads) and ESR (milliohms) despite their different scales.
//! Particles that would leave the box are clamped to the edge and have
//! that velocity component zeroed.
//!
//! A single run is sensitive to its random initialization, so an
//! estimation performs `repeats` independent runs from derived seeds and
//! reports the medians; the interquartile range across runs is kept as a
//! dispersion figure.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::predict::cost_prevalidated;
use crate::seed::child_seed;
use crate::signal::{validate_window, CapacitorParams, SamplingWindow, Violation};
use crate::stats;

/// Search and termination settings. Defaults hold the reference tuning
/// this estimator was verified with.
#[derive(Debug, Clone, PartialEq)]
pub struct PsoConfig {
    /// Number of particles.
    pub swarm_size: usize,
    /// Cognitive acceleration weight c1 (pull toward a particle's own best).
    pub cognitive_weight: f64,
    /// Social acceleration weight c2 (pull toward the swarm's best).
    pub social_weight: f64,
    /// Inertia at the first iteration.
    pub inertia_start: f64,
    /// Inertia at the last iteration.
    pub inertia_end: f64,
    /// Iteration budget for one run.
    pub max_iterations: usize,
    /// A run stops once the global best cost is at or below this.
    pub error_limit: f64,
    /// Capacitance search interval in farads, `(low, high)`.
    pub bounds_c: (f64, f64),
    /// ESR search interval in ohms, `(low, high)`.
    pub bounds_esr: (f64, f64),
    /// Independent runs folded into one estimate by the median.
    pub repeats: usize,
    /// Velocity magnitude limit per axis, as a fraction of that axis's
    /// bound width.
    pub velocity_clamp: f64,
    /// Base seed; run r uses the derived child seed r.
    pub seed: u64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            swarm_size: 10,
            cognitive_weight: 1.49,
            social_weight: 1.49,
            inertia_start: 0.9,
            inertia_end: 0.4,
            max_iterations: 100,
            error_limit: 1e-6,
            bounds_c: (1.1e-3, 6.6e-3),
            bounds_esr: (0.020, 0.120),
            repeats: 15,
            velocity_clamp: 0.5,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigError {
    /// Fewer than two particles cannot exchange social information.
    SwarmTooSmall,
    NoIterations,
    NoRepeats,
    /// A bound pair is not a proper interval with a positive lower end.
    InvalidBounds,
    /// Inertia values must be finite, non-negative, and non-increasing.
    InvalidInertia,
    /// Acceleration weights must be finite and non-negative.
    InvalidWeights,
    /// The velocity clamp must be positive and finite.
    InvalidVelocityClamp,
    /// The error limit must be non-negative (infinity permitted: the run
    /// then stops after its first iteration).
    InvalidErrorLimit,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConfigError::SwarmTooSmall => "swarm needs at least two particles",
            ConfigError::NoIterations => "max_iterations must be at least 1",
            ConfigError::NoRepeats => "repeats must be at least 1",
            ConfigError::InvalidBounds => "search bounds must satisfy 0 < low < high",
            ConfigError::InvalidInertia => "inertia must be finite and non-increasing",
            ConfigError::InvalidWeights => "acceleration weights must be finite and non-negative",
            ConfigError::InvalidVelocityClamp => "velocity clamp must be positive",
            ConfigError::InvalidErrorLimit => "error limit must be non-negative",
        })
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.swarm_size < 2 {
            return Err(ConfigError::SwarmTooSmall);
        }
        if self.max_iterations == 0 {
            return Err(ConfigError::NoIterations);
        }
        if self.repeats == 0 {
            return Err(ConfigError::NoRepeats);
        }
        let (c_lo, c_hi) = self.bounds_c;
        if !(c_lo.is_finite() && c_hi.is_finite() && c_lo > 0.0 && c_lo < c_hi) {
            return Err(ConfigError::InvalidBounds);
        }
        let (r_lo, r_hi) = self.bounds_esr;
        if !(r_lo.is_finite() && r_hi.is_finite() && r_lo > 0.0 && r_lo < r_hi) {
            return Err(ConfigError::InvalidBounds);
        }
        if !(self.inertia_start.is_finite()
            && self.inertia_end.is_finite()
            && self.inertia_end >= 0.0
            && self.inertia_start >= self.inertia_end)
        {
            return Err(ConfigError::InvalidInertia);
        }
        if !(self.cognitive_weight.is_finite()
            && self.cognitive_weight >= 0.0
            && self.social_weight.is_finite()
            && self.social_weight >= 0.0)
        {
            return Err(ConfigError::InvalidWeights);
        }
        if !(self.velocity_clamp > 0.0 && self.velocity_clamp.is_finite()) {
            return Err(ConfigError::InvalidVelocityClamp);
        }
        if self.error_limit.is_nan() || self.error_limit < 0.0 {
            return Err(ConfigError::InvalidErrorLimit);
        }
        Ok(())
    }

    /// Inertia for 0-based iteration `j`, interpolated over the budget.
    fn inertia(&self, j: usize) -> f64 {
        if self.max_iterations <= 1 {
            return self.inertia_start;
        }
        let frac = j as f64 / (self.max_iterations - 1) as f64;
        self.inertia_start - (self.inertia_start - self.inertia_end) * frac
    }
}

/// One particle, in normalized coordinates (both axes span [0, 1]).
#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    position: [f64; 2],
    velocity: [f64; 2],
    best_position: [f64; 2],
    best_cost: f64,
    cost: f64,
}

impl Particle {
    pub fn normalized_position(&self) -> [f64; 2] {
        self.position
    }

    pub fn normalized_velocity(&self) -> [f64; 2] {
        self.velocity
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn best_cost(&self) -> f64 {
        self.best_cost
    }
}

/// Swarm state for one run. Generic over the objective: the estimator
/// plugs in the window cost, tests plug in analytic functions.
#[derive(Debug, Clone)]
pub struct Swarm {
    lo: [f64; 2],
    width: [f64; 2],
    particles: Vec<Particle>,
    best_position: [f64; 2],
    best_cost: f64,
    rng: ChaCha8Rng,
}

impl Swarm {
    /// Initialize particles uniformly inside the bounds with velocities
    /// uniform in ±(bound width), evaluate them, and seat the global
    /// best. Draw order per particle: position (c, esr), then velocity
    /// (c, esr); this order is part of the reproducibility contract.
    pub fn new<F>(config: &PsoConfig, seed: u64, mut objective: F) -> Result<Self, ConfigError>
    where
        F: FnMut(&CapacitorParams) -> f64,
    {
        config.validate()?;
        let lo = [config.bounds_c.0, config.bounds_esr.0];
        let width = [
            config.bounds_c.1 - config.bounds_c.0,
            config.bounds_esr.1 - config.bounds_esr.0,
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut particles = Vec::with_capacity(config.swarm_size);
        for _ in 0..config.swarm_size {
            let position = [rng.gen::<f64>(), rng.gen::<f64>()];
            let velocity = [2.0 * rng.gen::<f64>() - 1.0, 2.0 * rng.gen::<f64>() - 1.0];
            particles.push(Particle {
                position,
                velocity,
                best_position: position,
                best_cost: f64::INFINITY,
                cost: f64::INFINITY,
            });
        }

        let mut swarm = Self {
            lo,
            width,
            particles,
            best_position: [0.0, 0.0],
            best_cost: f64::INFINITY,
            rng,
        };
        for i in 0..swarm.particles.len() {
            let params = swarm.particle_params(i);
            let cost = objective(&params);
            let p = &mut swarm.particles[i];
            p.cost = cost;
            p.best_cost = cost;
            p.best_position = p.position;
        }
        swarm.refresh_global_best();
        Ok(swarm)
    }

    /// Advance the swarm one iteration: move every particle against the
    /// global best frozen at the start of the iteration (synchronous
    /// update), re-evaluate, then update personal and global bests.
    pub fn step<F>(&mut self, config: &PsoConfig, iteration: usize, mut objective: F)
    where
        F: FnMut(&CapacitorParams) -> f64,
    {
        let w = config.inertia(iteration);
        let g = self.best_position;
        for p in &mut self.particles {
            let r1 = self.rng.gen::<f64>();
            let r2 = self.rng.gen::<f64>();
            for (d, &gd) in g.iter().enumerate() {
                let mut v = w * p.velocity[d]
                    + config.cognitive_weight * r1 * (p.best_position[d] - p.position[d])
                    + config.social_weight * r2 * (gd - p.position[d]);
                v = v.clamp(-config.velocity_clamp, config.velocity_clamp);
                let mut x = p.position[d] + v;
                if x < 0.0 {
                    x = 0.0;
                    v = 0.0;
                } else if x > 1.0 {
                    x = 1.0;
                    v = 0.0;
                }
                p.velocity[d] = v;
                p.position[d] = x;
            }
        }
        for i in 0..self.particles.len() {
            let params = self.particle_params(i);
            let cost = objective(&params);
            let p = &mut self.particles[i];
            p.cost = cost;
            if cost < p.best_cost {
                p.best_cost = cost;
                p.best_position = p.position;
            }
        }
        self.refresh_global_best();
    }

    /// Strictly-better scan in index order, so ties keep the
    /// lowest-indexed holder and the result is deterministic.
    fn refresh_global_best(&mut self) {
        for p in &self.particles {
            if p.best_cost < self.best_cost {
                self.best_cost = p.best_cost;
                self.best_position = p.best_position;
            }
        }
    }

    pub fn global_best(&self) -> CapacitorParams {
        self.denormalize(self.best_position)
    }

    pub fn global_best_cost(&self) -> f64 {
        self.best_cost
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    /// Current position of particle `i` in physical units.
    pub fn particle_params(&self, i: usize) -> CapacitorParams {
        self.denormalize(self.particles[i].position)
    }

    fn denormalize(&self, u: [f64; 2]) -> CapacitorParams {
        CapacitorParams::new(
            self.lo[0] + u[0] * self.width[0],
            self.lo[1] + u[1] * self.width[1],
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationReason {
    /// Global best cost reached the error limit.
    ErrorLimit,
    /// Iteration budget exhausted.
    MaxIterations,
}

impl fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TerminationReason::ErrorLimit => "error_limit",
            TerminationReason::MaxIterations => "max_iter",
        })
    }
}

/// Outcome of one swarm run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    /// Iterations actually executed (at least 1).
    pub iterations: usize,
    pub global_best: CapacitorParams,
    pub global_best_cost: f64,
    /// Global best cost after each iteration; length equals `iterations`.
    pub cost_history: Vec<f64>,
    pub terminated_by: TerminationReason,
}

/// Median-of-repeats estimate with per-run traces.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationReport {
    /// Caller-assigned window label, empty if none was given.
    pub window_id: String,
    pub per_repeat: Vec<RunTrace>,
    /// Median capacitance across repeats, in farads.
    pub c_median: f64,
    /// Median ESR across repeats, in ohms.
    pub esr_median: f64,
    /// Interquartile range of the capacitance estimates as a percentage
    /// of their median.
    pub c_iqr_pct: f64,
    /// Interquartile range of the ESR estimates as a percentage of their
    /// median.
    pub esr_iqr_pct: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimateError {
    InvalidWindow(Violation),
    InvalidConfig(ConfigError),
}

impl fmt::Display for EstimateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimateError::InvalidWindow(v) => write!(f, "invalid window: {v}"),
            EstimateError::InvalidConfig(e) => write!(f, "invalid estimator config: {e}"),
        }
    }
}

impl From<ConfigError> for EstimateError {
    fn from(e: ConfigError) -> Self {
        EstimateError::InvalidConfig(e)
    }
}

/// One swarm run against a window, seeded explicitly.
///
/// Every iteration ends with a termination check: error limit first, then
/// the iteration budget, so a run always executes at least one iteration
/// and `cost_history` records the best cost after each.
pub fn run_once(
    window: &SamplingWindow,
    config: &PsoConfig,
    seed: u64,
) -> Result<RunTrace, EstimateError> {
    config.validate()?;
    if let Some(violation) = validate_window(window).first_violation() {
        return Err(EstimateError::InvalidWindow(violation));
    }
    let objective = |p: &CapacitorParams| cost_prevalidated(window, p);
    let mut swarm = Swarm::new(config, seed, objective)?;
    let mut cost_history = Vec::new();
    let terminated_by = loop {
        let iteration = cost_history.len();
        swarm.step(config, iteration, objective);
        cost_history.push(swarm.global_best_cost());
        if swarm.global_best_cost() <= config.error_limit {
            break TerminationReason::ErrorLimit;
        }
        if cost_history.len() >= config.max_iterations {
            break TerminationReason::MaxIterations;
        }
    };
    Ok(RunTrace {
        iterations: cost_history.len(),
        global_best: swarm.global_best(),
        global_best_cost: swarm.global_best_cost(),
        cost_history,
        terminated_by,
    })
}

/// Full estimation: `repeats` independent runs seeded with the child
/// seeds of `config.seed`, reduced to median estimates.
pub fn estimate(
    window: &SamplingWindow,
    config: &PsoConfig,
) -> Result<EstimationReport, EstimateError> {
    config.validate()?;
    if let Some(violation) = validate_window(window).first_violation() {
        return Err(EstimateError::InvalidWindow(violation));
    }

    let mut per_repeat = Vec::with_capacity(config.repeats);
    for r in 0..config.repeats {
        per_repeat.push(run_once(window, config, child_seed(config.seed, r as u64))?);
    }

    let c_values: Vec<f64> = per_repeat.iter().map(|t| t.global_best.c).collect();
    let esr_values: Vec<f64> = per_repeat.iter().map(|t| t.global_best.esr).collect();
    let c_median = stats::median(&c_values).expect("repeats >= 1");
    let esr_median = stats::median(&esr_values).expect("repeats >= 1");

    Ok(EstimationReport {
        window_id: String::new(),
        per_repeat,
        c_median,
        esr_median,
        c_iqr_pct: iqr_pct_of(&c_values, c_median),
        esr_iqr_pct: iqr_pct_of(&esr_values, esr_median),
    })
}

/// IQR as a percentage of `reference`. Bounds have positive lower ends,
/// so medians are positive and this cannot fail in practice; NaN is the
/// defensive fallback.
fn iqr_pct_of(values: &[f64], reference: f64) -> f64 {
    match stats::boxplot_stats(values, reference) {
        Ok(b) => b.iqr_pct,
        Err(_) => f64::NAN,
    }
}
