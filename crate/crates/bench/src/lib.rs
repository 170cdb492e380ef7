//! Benchmark inputs shared by the criterion targets in `benches/`.

use pcn_core::PrimePowerPair;

/// Pairs used across the benchmarks, small enough to run in seconds.
pub fn bench_pairs() -> Vec<PrimePowerPair> {
    [(2u64, 1u32, 12u64), (3, 1, 8), (2, 2, 6), (5, 1, 6)]
        .iter()
        .map(|&(p, e, n)| PrimePowerPair::new(p, e, n).expect("valid pair"))
        .collect()
}
