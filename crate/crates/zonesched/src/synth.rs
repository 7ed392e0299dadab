//! Synthetic dependency-matrix generation, standing in for experiment
//! matrices that only exist as figures. Deterministic for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// The requested edge count cannot be realized on this many applications.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("{edges} edges are infeasible for {apps} applications (max {max})")]
pub struct InfeasibleProfile {
    pub apps: usize,
    pub edges: usize,
    pub max: usize,
}

/// Picks exactly `edges` distinct undirected pairs over `apps` vertices,
/// uniformly, reproducibly for the seed.
pub fn synthesize_dependencies(
    apps: usize,
    edges: usize,
    seed: u64,
) -> Result<Vec<(usize, usize)>, InfeasibleProfile> {
    let max = apps * apps.saturating_sub(1) / 2;
    if edges > max {
        return Err(InfeasibleProfile { apps, edges, max });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    if max <= 2_000_000 {
        // dense-friendly: partial Fisher-Yates over the full pair list
        let mut pairs = Vec::with_capacity(max);
        for a in 0..apps {
            for b in (a + 1)..apps {
                pairs.push((a, b));
            }
        }
        for i in 0..edges {
            let j = rng.gen_range(i..pairs.len());
            pairs.swap(i, j);
        }
        pairs.truncate(edges);
        pairs.sort_unstable();
        Ok(pairs)
    } else {
        // sparse relative to a huge pair space: rejection sampling
        let mut chosen = std::collections::BTreeSet::new();
        while chosen.len() < edges {
            let a = rng.gen_range(0..apps);
            let b = rng.gen_range(0..apps);
            if a != b {
                chosen.insert((a.min(b), a.max(b)));
            }
        }
        Ok(chosen.into_iter().collect())
    }
}
