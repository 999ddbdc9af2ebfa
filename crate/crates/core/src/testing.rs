//! Shared proptest strategies.

use proptest::prelude::*;

use crate::system::LinearSystem;

/// Admissible systems with one or two rows, `m <= 6` and small entries.
pub fn admissible_system() -> impl Strategy<Value = LinearSystem> {
    (3usize..=6, 1usize..=2)
        .prop_flat_map(|(m, r)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, m), r.min(m - 2))
        })
        .prop_filter_map("not admissible", |rows| {
            LinearSystem::new(rows, None)
                .ok()
                .filter(LinearSystem::is_admissible)
        })
}

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(29),
        max_global_rejects: 100_000,
        ..ProptestConfig::default()
    }
}
