//! Swarm self-tests on analytic objectives with known optima, independent
//! of the voltage model.

use capmon_core::pso::Swarm;
use capmon_core::{CapacitorParams, PsoConfig};

/// Quadratic bowl in bound-normalized coordinates with its minimum at
/// `target` (physical units). Smooth, separable, minimum value 0.
fn bowl(config: &PsoConfig, target: CapacitorParams) -> impl Fn(&CapacitorParams) -> f64 {
    let wc = config.bounds_c.1 - config.bounds_c.0;
    let wr = config.bounds_esr.1 - config.bounds_esr.0;
    move |p: &CapacitorParams| {
        let dc = (p.c - target.c) / wc;
        let dr = (p.esr - target.esr) / wr;
        dc * dc + dr * dr
    }
}

/// Run the full iteration budget and return the final best cost, checking
/// along the way that the global best never worsens.
fn run_to_budget<F: Fn(&CapacitorParams) -> f64>(config: &PsoConfig, seed: u64, f: F) -> f64 {
    let mut swarm = Swarm::new(config, seed, &f).unwrap();
    for iteration in 0..config.max_iterations {
        let before = swarm.global_best_cost();
        swarm.step(config, iteration, &f);
        assert!(
            swarm.global_best_cost() <= before,
            "global best worsened at iteration {iteration}"
        );
    }
    swarm.global_best_cost()
}

#[test]
fn swarm_converges_on_an_interior_bowl() {
    let config = PsoConfig::default();
    // Off-center interior target, on neither a bound nor the box midpoint.
    let target = CapacitorParams::new(3.3e-3, 0.070);
    let f = bowl(&config, target);

    let hits = (0..100u64)
        .filter(|&seed| run_to_budget(&config, seed, &f) <= 1e-6)
        .count();
    assert!(hits >= 95, "only {hits}/100 runs reached 1e-6 on the bowl");
}

#[test]
fn swarm_reaches_a_corner_optimum() {
    let config = PsoConfig::default();
    // Optimum at the lower corner of the box: reachable only because the
    // boundary rule clamps onto the bound instead of reflecting off it.
    let target = CapacitorParams::new(config.bounds_c.0, config.bounds_esr.0);
    let f = bowl(&config, target);

    let hits = (0..100u64)
        .filter(|&seed| run_to_budget(&config, seed, &f) <= 1e-6)
        .count();
    assert!(
        hits >= 95,
        "only {hits}/100 runs reached 1e-6 at the corner"
    );
}

#[test]
fn equal_seeds_walk_identical_trajectories() {
    let config = PsoConfig::default();
    let f = bowl(&config, CapacitorParams::new(2.2e-3, 0.040));

    let mut a = Swarm::new(&config, 7, &f).unwrap();
    let mut b = Swarm::new(&config, 7, &f).unwrap();
    for iteration in 0..20 {
        a.step(&config, iteration, &f);
        b.step(&config, iteration, &f);
        assert_eq!(a.global_best_cost(), b.global_best_cost());
        for (pa, pb) in a.particles().iter().zip(b.particles()) {
            assert_eq!(pa.normalized_position(), pb.normalized_position());
            assert_eq!(pa.normalized_velocity(), pb.normalized_velocity());
        }
    }
}
