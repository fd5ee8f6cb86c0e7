//! Shared helpers for the benchmark targets.

use patrol_core::model::Instance;
use patrol_core::generators::{gen_admissible_random, RandomParams};

/// A mid-sized deterministic instance for benchmarking.
pub fn bench_instance(seed: u64, n: usize) -> Instance {
    gen_admissible_random(&RandomParams { seed, n })
}
