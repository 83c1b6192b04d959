//! Exhaustive minimum-spanner search for desk-scale instances.
//!
//! Enumerates edge subsets in increasing size and returns the first one
//! that is a valid spanner, so the reported size is exactly the minimum.
//! The search space is 2^C(n,2) subsets, hence the hard guard on n.

use itertools::Itertools;
use thiserror::Error;

use crate::core::SimpleClique;
use crate::reach::{is_temporally_connected, Mode, Spanner, Universe};

/// Largest instance the CLI lets through by default (2^21 subsets).
pub const DEFAULT_MAX_N: usize = 7;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {n} vertices but the search guard allows at most {max_n}")]
    InstanceTooLarge { n: usize, max_n: usize },
}

#[derive(Clone, Debug)]
pub struct MinSpannerResult {
    /// Number of edges in a minimum spanner.
    pub size: usize,
    /// A concrete minimum spanner (lexicographically first of its size).
    pub witness: Spanner,
    /// How many subsets were verified before the search stopped.
    pub explored: usize,
}

/// Finds a minimum temporal spanner by brute force.
///
/// Subsets are tried in increasing size, and within a size in lexicographic
/// edge order, so the witness is deterministic. Sizes below n−1 cannot even
/// connect the underlying graph and are skipped.
pub fn min_spanner(c: &SimpleClique, max_n: usize) -> Result<MinSpannerResult, OracleError> {
    let n = c.n();
    if n > max_n {
        return Err(OracleError::InstanceTooLarge { n, max_n });
    }
    let all: Vec<_> = c.edges().collect();
    let mut explored = 0usize;
    for size in n.saturating_sub(1)..=all.len() {
        for subset in all.iter().copied().combinations(size) {
            explored += 1;
            let edges = subset.into_iter().collect();
            if is_temporally_connected(c, Mode::Strict, Universe::Sub(&edges)) {
                return Ok(MinSpannerResult {
                    size,
                    witness: Spanner::new(c, edges),
                    explored,
                });
            }
        }
    }
    unreachable!("the full edge set of a clique always spans it");
}

/// The adapted gossip lower bound: any spanner of an n-vertex temporal
/// clique has at least 2n−4 edges (for n ≥ 4).
pub fn gossip_lower_bound(n: usize) -> usize {
    (2 * n).saturating_sub(4)
}
