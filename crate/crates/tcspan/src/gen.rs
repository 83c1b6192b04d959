//! Instance generators and the hard-coded fixtures used across the tests.
//!
//! Random instances label the clique with a uniform permutation of
//! 0..C(n,2); the two structured families are cliques with no pivot vertex
//! and cliques that are not k-hop dismountable for any k.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::core::{
    all_edges, build_simple_clique, edge_count, EdgeId, Label, SimpleClique, VertexId,
};

/// Generator seed; the same seed and parameters always produce the same instance.
pub type Seed = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("generator needs n >= {min}, got {n}")]
    NTooSmall { n: usize, min: usize },
    #[error("unknown fixture name {name:?}")]
    UnknownFixture { name: String },
}

/// Uniformly random simple labeling: a seeded Fisher-Yates shuffle of the
/// labels 0..C(n,2) over the canonical edge order.
#[must_use]
pub fn random_clique(n: usize, seed: Seed) -> SimpleClique {
    assert!(n >= 2, "a clique needs at least two vertices, got n={n}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<Label> = (0..edge_count(n) as Label).collect();
    labels.shuffle(&mut rng);
    let entries: Vec<(EdgeId, Label)> = all_edges(n).zip(labels).collect();
    build_simple_clique(n, &entries).expect("permutation labelings are always simple")
}

/// A clique on which no vertex works as a pivot.
///
/// The labels fall into two periods around a threshold t: within the first
/// period no vertex is reachable from everyone (vertices 1 and 2 stay cut
/// off), and within the second no vertex reaches everyone. Any pivot would
/// need both at some threshold, so none exists.
pub fn gen_non_pivotable(n: usize) -> Result<SimpleClique, GenError> {
    if n < 6 {
        return Err(GenError::NTooSmall { n, min: 6 });
    }
    let (u, v, w) = (0, 1, 2);
    let t = edge_count(n - 2) as Label + 1;
    let mut entries: Vec<(EdgeId, Label)> = vec![(EdgeId::new(u, v), 0), (EdgeId::new(v, w), 1)];
    // First period: the subclique avoiding v and w, labels 2..=t lexicographically.
    let rest: Vec<VertexId> = std::iter::once(u).chain(3..n).collect();
    let mut next = 2;
    for (i, &x) in rest.iter().enumerate() {
        for &y in &rest[i + 1..] {
            entries.push((EdgeId::new(x, y), next));
            next += 1;
        }
    }
    debug_assert_eq!(next, t + 1);
    // Second period: v's remaining edges, then {u,w}, then w's remaining edges.
    for x in 3..n {
        entries.push((EdgeId::new(v, x), next));
        next += 1;
    }
    entries.push((EdgeId::new(u, w), next));
    next += 1;
    for x in 3..n {
        entries.push((EdgeId::new(w, x), next));
        next += 1;
    }
    debug_assert_eq!(next as usize, edge_count(n));
    Ok(build_simple_clique(n, &entries).expect("construction covers each edge once"))
}

/// A clique of `m` four-vertex gadgets that is not k-hop dismountable for
/// any k: every vertex sits inside one gadget whose three smallest and three
/// largest labels are arranged so that no emission/reception pair exists.
///
/// Panics if `m == 0`.
#[must_use]
pub fn gen_non_dismountable(m: usize) -> SimpleClique {
    assert!(m >= 1, "need at least one gadget copy");
    let n = 4 * m;
    let big = edge_count(n) as Label;
    let mut entries: Vec<(EdgeId, Label)> = Vec::with_capacity(edge_count(n));
    for i in 0..m {
        let b = 4 * i;
        let lo = 3 * i as Label;
        let hi = big - 3 * (m - i) as Label;
        entries.push((EdgeId::new(b, b + 1), lo));
        entries.push((EdgeId::new(b + 1, b + 3), lo + 1));
        entries.push((EdgeId::new(b, b + 2), lo + 2));
        entries.push((EdgeId::new(b + 1, b + 2), hi));
        entries.push((EdgeId::new(b, b + 3), hi + 1));
        entries.push((EdgeId::new(b + 2, b + 3), hi + 2));
    }
    // Edges between gadgets take the intermediate labels in lexicographic order.
    let mut next = 3 * m as Label;
    for e in all_edges(n) {
        if e.u() / 4 != e.v() / 4 {
            entries.push((e, next));
            next += 1;
        }
    }
    debug_assert_eq!(next, big - 3 * m as Label);
    build_simple_clique(n, &entries).expect("construction covers each edge once")
}

/// Random multi-labeling: every edge draws 1..=`max_labels` distinct labels
/// from 0..3*C(n,2). Exercises the reduction to simple instances.
#[must_use]
pub fn random_multi_clique(n: usize, seed: Seed, max_labels: usize) -> crate::core::MultiLabelClique {
    assert!(n >= 2 && max_labels >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = 3 * edge_count(n) as Label;
    let entries: Vec<(EdgeId, Vec<Label>)> = all_edges(n)
        .map(|e| {
            let k = rng.random_range(1..=max_labels);
            let mut ls: Vec<Label> = (0..k).map(|_| rng.random_range(0..pool)).collect();
            ls.sort_unstable();
            ls.dedup();
            (e, ls)
        })
        .collect();
    crate::core::MultiLabelClique::new(n, &entries).expect("construction covers each edge once")
}

/// A random legal bipartite residual with emitters 0..k and collectors
/// k..2k. The minimum matching takes the k globally smallest labels and the
/// maximum matching the k largest, which pins them as extreme at both
/// endpoints; the middle band is a shuffled permutation.
#[must_use]
pub fn random_residual(k: usize, seed: Seed) -> crate::layered::BipartiteResidual {
    use std::collections::BTreeMap;
    assert!(k >= 1, "a residual needs at least one emitter, got k={k}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sigma: Vec<usize> = (0..k).collect();
    sigma.shuffle(&mut rng);
    let mut tau: Vec<usize> = (0..k).collect();
    if k >= 2 {
        // The two matchings must not share an edge.
        loop {
            tau.shuffle(&mut rng);
            if tau.iter().zip(&sigma).all(|(a, b)| a != b) {
                break;
            }
        }
    }
    let square = (k * k) as Label;
    let mut low: Vec<Label> = (0..k as Label).collect();
    low.shuffle(&mut rng);
    let mut high: Vec<Label> = (square - k as Label..square).collect();
    high.shuffle(&mut rng);
    let mut mid: Vec<Label> = (k as Label..square - k as Label).collect();
    mid.shuffle(&mut rng);

    let mut labels = BTreeMap::new();
    let mut sminus = BTreeMap::new();
    let mut splus = BTreeMap::new();
    for i in 0..k {
        let down = EdgeId::new(i, k + sigma[i]);
        labels.insert(down, low[i]);
        sminus.insert(i, down);
        let up = EdgeId::new(i, k + tau[i]);
        labels.insert(up, high[i]);
        splus.insert(i, up);
    }
    let mut rest = mid.into_iter();
    for i in 0..k {
        for c in k..2 * k {
            labels
                .entry(EdgeId::new(i, c))
                .or_insert_with(|| rest.next().expect("band sizes add up"));
        }
    }
    crate::layered::BipartiteResidual::new(
        (0..k).collect(),
        (k..2 * k).collect(),
        labels,
        sminus,
        splus,
    )
    .expect("banded labelings satisfy every residual invariant")
}

/// Hard-coded instances used by the worked examples and the acceptance
/// suite. Vertices are letters a, b, c, ... mapped to ids 0, 1, 2, ...
pub fn fixture(name: &str) -> Result<SimpleClique, GenError> {
    let data: &[(VertexId, VertexId, Label)] = match name {
        // Six vertices; the fireworks worked example.
        "fix6" => &[
            (0, 1, 10), (0, 2, 7), (0, 3, 3), (0, 4, 8), (0, 5, 6),
            (1, 2, 0), (1, 3, 5), (1, 4, 12), (1, 5, 13),
            (2, 3, 2), (2, 4, 4), (2, 5, 11),
            (3, 4, 9), (3, 5, 14),
            (4, 5, 1),
        ],
        // Eight vertices; drives the pipeline straight into a bipartite residual.
        "fix8" => &[
            (0, 1, 26), (0, 2, 2), (0, 3, 19), (0, 4, 13), (0, 5, 27), (0, 6, 17), (0, 7, 3),
            (1, 2, 0), (1, 3, 5), (1, 4, 15), (1, 5, 12), (1, 6, 11), (1, 7, 1),
            (2, 3, 23), (2, 4, 10), (2, 5, 9), (2, 6, 8), (2, 7, 24),
            (3, 4, 20), (3, 5, 4), (3, 6, 25), (3, 7, 22),
            (4, 5, 21), (4, 6, 6), (4, 7, 14),
            (5, 6, 18), (5, 7, 7),
            (6, 7, 16),
        ],
        // Five vertices with a pivot.
        "fixp5" => &[
            (0, 1, 5), (0, 2, 7), (0, 3, 2), (0, 4, 3),
            (1, 2, 8), (1, 3, 1), (1, 4, 6),
            (2, 3, 9), (2, 4, 0),
            (3, 4, 4),
        ],
        // Five vertices, no pivot.
        "fixnp5" => &[
            (0, 1, 0), (0, 2, 5), (0, 3, 1), (0, 4, 3),
            (1, 2, 4), (1, 3, 6), (1, 4, 7),
            (2, 3, 2), (2, 4, 9),
            (3, 4, 8),
        ],
        // Five vertices, fully 1-hop dismountable.
        "fixd5" => &[
            (0, 1, 0), (0, 2, 3), (0, 3, 2), (0, 4, 9),
            (1, 2, 4), (1, 3, 6), (1, 4, 1),
            (2, 3, 5), (2, 4, 7),
            (3, 4, 8),
        ],
        // The four-vertex gadget that defeats dismounting at every k.
        "fixnd4" => &[
            (0, 1, 2), (0, 2, 5), (0, 3, 3),
            (1, 2, 4), (1, 3, 0),
            (2, 3, 1),
        ],
        other => {
            return Err(GenError::UnknownFixture { name: other.to_string() });
        }
    };
    let n = data.iter().map(|&(_, v, _)| v + 1).max().unwrap();
    let entries: Vec<(EdgeId, Label)> =
        data.iter().map(|&(u, v, l)| (EdgeId::new(u, v), l)).collect();
    Ok(build_simple_clique(n, &entries).expect("fixture data is a valid simple labeling"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{extreme_edge, Side, TemporalInstance};
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn random_labels_are_a_permutation() {
        for n in [2, 6, 9] {
            let c = random_clique(n, 42);
            let seen: BTreeSet<Label> = c.labeled_edges().map(|(_, l)| l).collect();
            assert_eq!(seen.len(), edge_count(n));
            assert_eq!(*seen.first().unwrap(), 0);
            assert_eq!(*seen.last().unwrap(), edge_count(n) as Label - 1);
        }
    }

    #[test]
    fn random_is_seed_deterministic() {
        assert_eq!(random_clique(16, 7), random_clique(16, 7));
        let mut distinct = 0;
        for s in 0..20 {
            if random_clique(16, 2 * s) != random_clique(16, 2 * s + 1) {
                distinct += 1;
            }
        }
        assert_eq!(distinct, 20);
    }

    #[test]
    fn non_pivotable_matches_worked_n6_labels() {
        let c = gen_non_pivotable(6).unwrap();
        let want = [
            (0, 1, 0), (1, 2, 1),
            (0, 3, 2), (0, 4, 3), (0, 5, 4), (3, 4, 5), (3, 5, 6), (4, 5, 7),
            (1, 3, 8), (1, 4, 9), (1, 5, 10),
            (0, 2, 11),
            (2, 3, 12), (2, 4, 13), (2, 5, 14),
        ];
        for (u, v, l) in want {
            assert_eq!(c.label(EdgeId::new(u, v)), l, "edge {u}-{v}");
        }
        assert_eq!(gen_non_pivotable(5).unwrap_err(), GenError::NTooSmall { n: 5, min: 6 });
    }

    #[test]
    fn non_dismountable_m2_extreme_labels() {
        let c = gen_non_dismountable(2);
        assert_eq!(c.n(), 8);
        // Copy 0 takes mins {0,1,2} and maxes {22,23,24}; copy 1 shifts by 3.
        assert_eq!(c.label(EdgeId::new(0, 1)), 0);
        assert_eq!(c.label(EdgeId::new(1, 3)), 1);
        assert_eq!(c.label(EdgeId::new(0, 2)), 2);
        assert_eq!(c.label(EdgeId::new(1, 2)), 22);
        assert_eq!(c.label(EdgeId::new(0, 3)), 23);
        assert_eq!(c.label(EdgeId::new(2, 3)), 24);
        assert_eq!(c.label(EdgeId::new(4, 5)), 3);
        assert_eq!(c.label(EdgeId::new(6, 7)), 27);
    }

    #[test]
    fn non_dismountable_gadget_extremes_form_paths() {
        for m in [1, 2, 3] {
            let c = gen_non_dismountable(m);
            for i in 0..m {
                let verts: Vec<VertexId> = (4 * i..4 * i + 4).collect();
                for side in [Side::Min, Side::Max] {
                    let extremes: BTreeSet<EdgeId> =
                        verts.iter().map(|&v| extreme_edge(&c, v, side)).collect();
                    // Three edges whose endpoints stay in the gadget and cover it.
                    assert_eq!(extremes.len(), 3);
                    let mut touched = BTreeSet::new();
                    let mut degree = vec![0usize; c.n()];
                    for e in &extremes {
                        assert!(verts.contains(&e.u()) && verts.contains(&e.v()));
                        touched.insert(e.u());
                        touched.insert(e.v());
                        degree[e.u()] += 1;
                        degree[e.v()] += 1;
                    }
                    assert_eq!(touched.len(), 4);
                    // A 3-edge subgraph on 4 vertices touching all of them with
                    // no degree-3 vertex is a path.
                    assert!(verts.iter().all(|&v| degree[v] <= 2));
                }
            }
        }
    }

    #[test]
    fn fixtures_resolve() {
        for (name, n) in [
            ("fix6", 6),
            ("fix8", 8),
            ("fixp5", 5),
            ("fixnp5", 5),
            ("fixd5", 5),
            ("fixnd4", 4),
        ] {
            let c = fixture(name).unwrap();
            assert_eq!(c.n(), n, "{name}");
        }
        assert_eq!(
            fixture("fix7").unwrap_err(),
            GenError::UnknownFixture { name: "fix7".to_string() }
        );
    }

    #[test]
    fn fixture_hashes_are_stable() {
        // Guards against silent edits to the embedded label data.
        let fix6 = fixture("fix6").unwrap();
        let again = fixture("fix6").unwrap();
        assert_eq!(fix6.content_hash(), again.content_hash());
        assert_ne!(fix6.content_hash(), fixture("fix8").unwrap().content_hash());
    }

    proptest! {
        #[test]
        fn generators_always_validate(n in 6usize..12, m in 1usize..4, seed in any::<u64>()) {
            // Constructors run the full simple-labeling validation, so just build.
            let _ = random_clique(n, seed);
            let _ = gen_non_pivotable(n).unwrap();
            let _ = gen_non_dismountable(m);
        }
    }
}
