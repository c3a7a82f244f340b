//! Deterministic derivation of per-run RNG seeds from one base seed.
//!
//! Every stochastic component (swarm initialization, repeat runs, noise
//! streams) seeds its own generator with `child_seed(base, index)` so runs
//! are independent yet exactly reproducible, and inserting or removing one
//! consumer never shifts another consumer's stream.

/// Derive the seed for child stream `index` of `base`.
///
/// This is the SplitMix64 output function applied to `base` advanced by
/// `index + 1` golden-ratio increments. It is a fixed bijection per index,
/// identical on every platform, and considered part of the crate's
/// reproducibility contract.
pub fn child_seed(base: u64, index: u64) -> u64 {
    let z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    mix(z)
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
