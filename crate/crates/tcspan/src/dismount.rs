//! Dismounting: peel off a vertex that can delegate its connectivity, then
//! recurse on the rest.
//!
//! A vertex v is k-hop dismountable when it has an emission journey of at
//! most k hops whose last hop enters some u through u's minimum edge, and a
//! reception journey of at most k hops whose first hop leaves some w through
//! w's maximum edge. Any journey into u early enough to continue along u's
//! minimum edge also works for v, and symmetrically for receptions, so the
//! residual clique without v plus the two journeys spans everything.

use std::collections::BTreeSet;

use crate::core::{EdgeId, Label, SimpleClique, Side, VertexId, View};
use crate::reach::{Hop, Journey, Spanner};

/// One dismount: `out_journey` starts at `v` and arrives through the head's
/// minimum edge; `in_journey` ends at `v` and departs through the tail's
/// maximum edge. Both are relative to the residual clique of their step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DismountStep {
    pub v: VertexId,
    pub out_journey: Journey,
    pub in_journey: Journey,
}

/// Label as seen by the search: negating flips min/max and journey
/// direction, which turns the reception search into the emission search.
fn dir_label(view: &View<'_>, e: EdgeId, negate: bool) -> Label {
    let l = view.label(e);
    if negate {
        -l
    } else {
        l
    }
}

fn dir_min_edge(view: &View<'_>, w: VertexId, negate: bool) -> EdgeId {
    view.extreme(w, if negate { Side::Max } else { Side::Min })
}

/// Exhaustive DFS over label-increasing simple paths from `v`, up to `k`
/// hops, keeping the best witness whose last hop is the head's minimum edge.
/// Best means: fewest hops, then largest last-hop label, then smallest
/// terminal vertex, then lexicographic hop sequence — a total order, so the
/// result does not depend on exploration order.
fn emission_search(view: &View<'_>, v: VertexId, k: usize, negate: bool) -> Option<Journey> {
    type Key = (usize, Label, VertexId, Vec<Hop>);
    fn rec(
        view: &View<'_>,
        cur: VertexId,
        k: usize,
        negate: bool,
        last: Option<Label>,
        on_path: &mut Vec<bool>,
        path: &mut Vec<Hop>,
        best: &mut Option<Key>,
    ) {
        for &w in view.vertices() {
            if on_path[w] {
                continue;
            }
            let e = EdgeId::new(cur, w);
            let l = dir_label(view, e, negate);
            if last.is_some_and(|p| l <= p) {
                continue;
            }
            path.push((cur, w, l));
            if e == dir_min_edge(view, w, negate) {
                let key: Key = (path.len(), -l, w, path.clone());
                if best.as_ref().is_none_or(|b| key < *b) {
                    *best = Some(key);
                }
            }
            if path.len() < k {
                on_path[w] = true;
                rec(view, w, k, negate, Some(l), on_path, path, best);
                on_path[w] = false;
            }
            path.pop();
        }
    }
    let mut on_path = vec![false; view.clique().n()];
    on_path[v] = true;
    let mut best = None;
    rec(view, v, k, negate, None, &mut on_path, &mut Vec::new(), &mut best);
    best.map(|(_, _, _, hops)| Journey::new(hops))
}

/// Reception = emission on negated labels, read backwards.
fn reception_search(view: &View<'_>, v: VertexId, k: usize) -> Option<Journey> {
    let mirrored = emission_search(view, v, k, true)?;
    let hops = mirrored
        .hops
        .into_iter()
        .rev()
        .map(|(a, b, nl)| (b, a, -nl))
        .collect();
    Some(Journey::new(hops))
}

pub(crate) fn find_dismountable_view(view: &View<'_>, k: usize) -> Option<DismountStep> {
    debug_assert!(view.len() >= 3 && k >= 1);
    for &v in view.vertices() {
        let Some(out_journey) = emission_search(view, v, k, false) else { continue };
        let Some(in_journey) = reception_search(view, v, k) else { continue };
        return Some(DismountStep { v, out_journey, in_journey });
    }
    None
}

/// First dismountable vertex in ascending id order, with its witness
/// journeys: the emission with the latest arrival label and the reception
/// with the earliest departure label among minimum-hop candidates.
#[must_use]
pub fn find_dismountable(c: &SimpleClique, k: usize) -> Option<DismountStep> {
    assert!(c.n() >= 3, "dismounting needs n >= 3, got {}", c.n());
    assert!(k >= 1, "need at least one hop");
    find_dismountable_view(&View::full(c), k)
}

/// Dismounts vertices until two remain, accumulating all journey edges plus
/// the final lone edge. Returns none as soon as some residual clique has no
/// dismountable vertex.
///
/// With k=1 every step contributes exactly two fresh edges (both touch the
/// vertex being removed), so the spanner has exactly 2n-3 edges; general k
/// stays under 2k(n-2)+1.
#[must_use]
pub fn dismount_fully(c: &SimpleClique, k: usize) -> Option<Spanner> {
    assert!(k >= 1, "need at least one hop");
    let mut view = View::full(c);
    let mut edges: BTreeSet<EdgeId> = BTreeSet::new();
    while view.len() > 2 {
        let step = find_dismountable_view(&view, k)?;
        edges.extend(step.out_journey.edges());
        edges.extend(step.in_journey.edges());
        view = view.without(step.v);
    }
    edges.insert(EdgeId::new(view.vertices()[0], view.vertices()[1]));
    Some(Spanner::new(c, edges))
}
