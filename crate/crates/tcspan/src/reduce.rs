//! Reduction from multi-labeled cliques to simple ones, one-way under
//! non-strict semantics: every spanner found on the simple output lifts to a
//! valid spanner of the original instance.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::core::{build_simple_clique, EdgeId, Label, MultiLabelClique, SimpleClique, TemporalInstance};
use crate::reach::Spanner;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("label map does not match the spanner: {reason}")]
    MapMismatch { reason: String },
}

/// One edge's relabeling. The reduction keeps the edge set fixed, so the
/// same `edge` names both sides; `original_label` is the representative that
/// `new_label` stands for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMapEntry {
    pub edge: EdgeId,
    pub new_label: Label,
    pub original_label: Label,
}

/// Bijection between the simple output's labels and the representatives they
/// came from, tied to both instances by content hash.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMap {
    pub simple_hash: u64,
    pub original_hash: u64,
    /// One entry per edge, in lexicographic edge order.
    pub entries: Vec<LabelMapEntry>,
}

impl LabelMap {
    #[must_use]
    pub fn entry_for(&self, edge: EdgeId) -> Option<&LabelMapEntry> {
        self.entries
            .binary_search_by_key(&edge, |en| en.edge)
            .ok()
            .map(|i| &self.entries[i])
    }
}

/// Keeps each edge's smallest label as its representative, then renumbers
/// all edges 0..C(n,2) in (representative, edge id) order. The output labels
/// are globally distinct, and the renumbering preserves representative
/// order, which is what makes lifted journeys non-decreasing.
#[must_use]
pub fn to_simple(m: &MultiLabelClique) -> (SimpleClique, LabelMap) {
    let mut order: Vec<(Label, EdgeId)> = m.edges().map(|e| (m.labels(e)[0], e)).collect();
    order.sort_unstable();
    let labeled: Vec<(EdgeId, Label)> = order
        .iter()
        .enumerate()
        .map(|(i, &(_, e))| (e, i as Label))
        .collect();
    let simple = build_simple_clique(m.n(), &labeled)
        .expect("globally distinct labels are always a simple labeling");
    let mut entries: Vec<LabelMapEntry> = order
        .into_iter()
        .enumerate()
        .map(|(i, (rep, e))| LabelMapEntry { edge: e, new_label: i as Label, original_label: rep })
        .collect();
    entries.sort_unstable_by_key(|en| en.edge);
    let map = LabelMap {
        simple_hash: simple.content_hash(),
        original_hash: m.content_hash(),
        entries,
    };
    (simple, map)
}

/// Carries a spanner of the simple instance back to the original one. Valid
/// under non-strict semantics because the renumbering preserves the order of
/// representatives.
pub fn lift_spanner(s: &Spanner, map: &LabelMap) -> Result<Spanner, ReduceError> {
    if s.instance_hash != map.simple_hash {
        return Err(ReduceError::MapMismatch {
            reason: format!(
                "spanner belongs to instance {:#018x}, map to {:#018x}",
                s.instance_hash, map.simple_hash
            ),
        });
    }
    let mut edges = std::collections::BTreeSet::new();
    for &e in &s.edges {
        if map.entry_for(e).is_none() {
            return Err(ReduceError::MapMismatch { reason: format!("edge {e} is not in the map") });
        }
        edges.insert(e);
    }
    Ok(Spanner { instance_hash: map.original_hash, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{all_edges, VertexId};
    use crate::gen::{random_multi_clique, random_clique};
    use crate::reach::{arrival_forest, verify_spanner, Journey, Mode, Universe};
    use proptest::prelude::*;

    fn e(a: VertexId, b: VertexId) -> EdgeId {
        EdgeId::new(a, b)
    }

    #[test]
    fn k3_worked_example() {
        let m = MultiLabelClique::new(
            3,
            &[(e(0, 1), vec![1, 2]), (e(0, 2), vec![1]), (e(1, 2), vec![3])],
        )
        .unwrap();
        let (simple, map) = to_simple(&m);
        assert_eq!(simple.label(e(0, 1)), 0);
        assert_eq!(simple.label(e(0, 2)), 1);
        assert_eq!(simple.label(e(1, 2)), 2);
        assert_eq!(map.entry_for(e(0, 1)).unwrap().original_label, 1);

        // Lifting keeps the edge set; validity transfers only for spanners
        // that were valid on the simple side to begin with.
        let partial = Spanner::new(&simple, [e(0, 1), e(1, 2)].into_iter().collect());
        let lifted = lift_spanner(&partial, &map).unwrap();
        assert_eq!(lifted.edges, partial.edges);
        assert_eq!(lifted.instance_hash, m.content_hash());

        let full = Spanner::new(&simple, simple.edges().collect());
        assert_eq!(verify_spanner(&simple, &full, Mode::Strict), Ok(true));
        let lifted_full = lift_spanner(&full, &map).unwrap();
        assert_eq!(verify_spanner(&m, &lifted_full, Mode::NonStrict), Ok(true));
    }

    #[test]
    fn all_equal_labels_still_reduce() {
        let m = MultiLabelClique::new(
            3,
            &[(e(0, 1), vec![5]), (e(0, 2), vec![5]), (e(1, 2), vec![5])],
        )
        .unwrap();
        let (simple, _) = to_simple(&m);
        assert_eq!(simple.label(e(0, 1)), 0);
        assert_eq!(simple.label(e(0, 2)), 1);
        assert_eq!(simple.label(e(1, 2)), 2);
    }

    #[test]
    fn simple_input_keeps_relative_order() {
        let c = random_clique(6, 11);
        let entries: Vec<_> = c.labeled_edges().map(|(e, l)| (e, vec![10 * l + 3])).collect();
        let m = MultiLabelClique::new(6, &entries).unwrap();
        let (simple, _) = to_simple(&m);
        for a in all_edges(6) {
            for b in all_edges(6) {
                assert_eq!(c.label(a) < c.label(b), simple.label(a) < simple.label(b));
            }
        }
    }

    #[test]
    fn lift_rejects_foreign_spanner() {
        let m = random_multi_clique(5, 3, 2);
        let (simple, map) = to_simple(&m);
        let other = random_clique(5, 99);
        let foreign = Spanner::new(&other, other.edges().collect());
        assert!(lift_spanner(&foreign, &map).is_err());
        let ok = Spanner::new(&simple, simple.edges().collect());
        assert!(lift_spanner(&ok, &map).is_ok());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn strict_journeys_lift_to_nonstrict(n in 2usize..7, seed in any::<u64>()) {
            let m = random_multi_clique(n, seed, 3);
            let (simple, map) = to_simple(&m);
            for s in 0..n {
                let f = arrival_forest(&simple, s, Mode::Strict, Universe::Full, None);
                for v in 0..n {
                    let Some(j) = f.journey_to(v) else { continue };
                    let lifted = Journey::new(
                        j.hops
                            .iter()
                            .map(|&(x, y, _)| {
                                let en = map.entry_for(EdgeId::new(x, y)).unwrap();
                                (x, y, en.original_label)
                            })
                            .collect(),
                    );
                    prop_assert!(lifted.is_valid(&m, Mode::NonStrict));
                }
            }
        }

        #[test]
        fn reduction_output_is_a_permutation(n in 2usize..7, seed in any::<u64>()) {
            let m = random_multi_clique(n, seed, 3);
            let (simple, map) = to_simple(&m);
            let mut labels: Vec<Label> = simple.labeled_edges().map(|(_, l)| l).collect();
            labels.sort_unstable();
            let want: Vec<Label> = (0..labels.len() as Label).collect();
            prop_assert_eq!(labels, want);
            prop_assert_eq!(map.entries.len(), simple.edge_count());
        }
    }
}
