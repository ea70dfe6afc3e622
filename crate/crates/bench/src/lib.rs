//! Fixtures shared by the benchmarks.

use rendezvous_core::{GameConfig, Result};

/// Rendezvous games with `m` paths for each `m` in `sizes`.
pub fn rendezvous_games(sizes: &[usize]) -> Result<Vec<GameConfig>> {
    sizes.iter().map(|&m| GameConfig::rendezvous(m)).collect()
}
