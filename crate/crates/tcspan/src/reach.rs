//! Temporal reachability: earliest-arrival and latest-departure sweeps,
//! journeys, connectivity, and spanner verification.
//!
//! Everything else in the crate is judged against this module, so it stays
//! deliberately small: one label-sorted sweep, run forwards for arrivals and
//! on negated labels for departures.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::core::{all_edges, EdgeId, Label, TemporalInstance, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Labels strictly increase along a journey.
    Strict,
    /// Labels may repeat along a journey (matters only for multi-labelings).
    NonStrict,
}

/// One journey hop: from, to, label.
pub type Hop = (VertexId, VertexId, Label);

/// Earliest arrival label at a vertex. The source sits at `NegInf` so its
/// first edge may carry any label; the derived order makes smaller better.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Arrival {
    NegInf,
    At(Label),
    Never,
}

/// Latest label of a first edge on some journey to the target; the target
/// itself sits at `PosInf`. The derived order makes larger better.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Departure {
    Never,
    At(Label),
    PosInf,
}

/// A temporal path: consecutive hops chain on vertices and labels increase
/// (strictly, or weakly in non-strict mode).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Journey {
    pub hops: Vec<Hop>,
}

impl Journey {
    #[must_use]
    pub fn new(hops: Vec<Hop>) -> Journey {
        Journey { hops }
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.hops.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.hops.is_empty()
    }

    #[must_use]
    pub fn start(&self) -> Option<VertexId> {
        self.hops.first().map(|h| h.0)
    }

    #[must_use]
    pub fn end(&self) -> Option<VertexId> {
        self.hops.last().map(|h| h.1)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.hops.iter().map(|&(u, v, _)| EdgeId::new(u, v))
    }

    /// True when the hops chain, the labels respect `mode`, and every hop
    /// uses a label the instance actually has on that edge.
    #[must_use]
    pub fn is_valid(&self, inst: &impl TemporalInstance, mode: Mode) -> bool {
        let n = inst.vertex_count();
        for w in self.hops.windows(2) {
            if w[0].1 != w[1].0 {
                return false;
            }
            let ok = match mode {
                Mode::Strict => w[0].2 < w[1].2,
                Mode::NonStrict => w[0].2 <= w[1].2,
            };
            if !ok {
                return false;
            }
        }
        self.hops.iter().all(|&(u, v, t)| {
            u != v && u < n && v < n && inst.label_list(EdgeId::new(u, v)).contains(&t)
        })
    }
}

/// An edge subset to sweep over; `Full` means every instance edge.
#[derive(Clone, Copy, Debug)]
pub enum Universe<'a> {
    Full,
    Sub(&'a BTreeSet<EdgeId>),
}

impl Universe<'_> {
    fn contains(self, e: EdgeId) -> bool {
        match self {
            Universe::Full => true,
            Universe::Sub(s) => s.contains(&e),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReachError {
    #[error("spanner records instance {spanner:#018x} but was checked against {instance:#018x}")]
    InstanceMismatch { spanner: u64, instance: u64 },
    #[error("spanner edge {edge} does not exist in the instance")]
    ForeignEdge { edge: EdgeId },
}

/// An edge subset that preserves temporal connectivity of the instance it
/// was built from, identified by content hash.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spanner {
    pub instance_hash: u64,
    pub edges: BTreeSet<EdgeId>,
}

impl Spanner {
    /// Panics if an edge falls outside the instance; library constructions
    /// never do, and deserialized artifacts go through `verify_spanner`.
    #[must_use]
    pub fn new(inst: &impl TemporalInstance, edges: BTreeSet<EdgeId>) -> Spanner {
        let n = inst.vertex_count();
        for e in &edges {
            assert!(e.v() < n, "edge {e} outside instance with n={n}");
        }
        Spanner { instance_hash: inst.content_hash(), edges }
    }

    #[must_use]
    pub fn size(&self) -> usize {
        self.edges.len()
    }
}

/// Universe triples sorted by (label, canonical edge id); the tie order makes
/// predecessor choices deterministic.
fn sorted_triples(inst: &impl TemporalInstance, universe: Universe<'_>) -> Vec<(Label, VertexId, VertexId)> {
    let mut triples = Vec::new();
    for e in all_edges(inst.vertex_count()) {
        if universe.contains(e) {
            for &l in inst.label_list(e) {
                triples.push((l, e.u(), e.v()));
            }
        }
    }
    triples.sort_unstable();
    triples
}

/// The sweep shared by every reachability question. Labels ascend; within an
/// equal-label block, non-strict mode re-scans until no relaxation fires.
/// Returns arrivals plus one predecessor hop per reached vertex.
pub(crate) fn sweep(
    n: usize,
    triples: &[(Label, VertexId, VertexId)],
    source: VertexId,
    mode: Mode,
    min_start: Option<Label>,
) -> (Vec<Arrival>, Vec<Option<Hop>>) {
    let mut arr = vec![Arrival::Never; n];
    let mut pred: Vec<Option<Hop>> = vec![None; n];
    arr[source] = Arrival::NegInf;
    let mut i = match min_start {
        Some(ms) => triples.partition_point(|&(l, _, _)| l < ms),
        None => 0,
    };
    while i < triples.len() {
        let label = triples[i].0;
        let mut j = i;
        while j < triples.len() && triples[j].0 == label {
            j += 1;
        }
        let block = &triples[i..j];
        let leave = |a: Arrival| match mode {
            Mode::Strict => a < Arrival::At(label),
            Mode::NonStrict => a <= Arrival::At(label),
        };
        loop {
            let mut changed = false;
            for &(t, u, v) in block {
                let at = Arrival::At(t);
                if leave(arr[u]) && at < arr[v] {
                    arr[v] = at;
                    pred[v] = Some((u, v, t));
                    changed = true;
                }
                if leave(arr[v]) && at < arr[u] {
                    arr[u] = at;
                    pred[u] = Some((v, u, t));
                    changed = true;
                }
            }
            // Strict journeys cannot chain equal labels, so one pass settles
            // the block; arrivals set inside it never satisfy `leave`.
            if !changed || mode == Mode::Strict {
                break;
            }
        }
        i = j;
    }
    (arr, pred)
}

/// Earliest arrival label per vertex for journeys from `source` whose first
/// hop label is at least `min_start` (`None` puts no bound on it).
pub fn earliest_arrivals(
    inst: &impl TemporalInstance,
    source: VertexId,
    mode: Mode,
    universe: Universe<'_>,
    min_start: Option<Label>,
) -> Vec<Arrival> {
    arrival_forest(inst, source, mode, universe, min_start).arrivals
}

/// Arrivals plus reconstructed witness journeys from the source.
pub struct ArrivalForest {
    pub source: VertexId,
    pub arrivals: Vec<Arrival>,
    pub preds: Vec<Option<Hop>>,
}

impl ArrivalForest {
    /// The witness journey source -> v, empty for the source itself.
    #[must_use]
    pub fn journey_to(&self, v: VertexId) -> Option<Journey> {
        if self.arrivals[v] == Arrival::Never {
            return None;
        }
        let mut hops = Vec::new();
        let mut cur = v;
        while let Some(h) = self.preds[cur] {
            hops.push(h);
            cur = h.0;
        }
        debug_assert_eq!(cur, self.source);
        hops.reverse();
        Some(Journey::new(hops))
    }

    /// Union of predecessor hops: at most n-1 edges spanning everything the
    /// source reaches.
    #[must_use]
    pub fn tree_edges(&self) -> BTreeSet<EdgeId> {
        self.preds
            .iter()
            .flatten()
            .map(|&(u, v, _)| EdgeId::new(u, v))
            .collect()
    }
}

pub fn arrival_forest(
    inst: &impl TemporalInstance,
    source: VertexId,
    mode: Mode,
    universe: Universe<'_>,
    min_start: Option<Label>,
) -> ArrivalForest {
    let triples = sorted_triples(inst, universe);
    let (arrivals, preds) = sweep(inst.vertex_count(), &triples, source, mode, min_start);
    ArrivalForest { source, arrivals, preds }
}

/// Latest first-hop label over journeys reaching `target`, per vertex.
pub fn latest_departures(
    inst: &impl TemporalInstance,
    target: VertexId,
    mode: Mode,
    universe: Universe<'_>,
) -> Vec<Departure> {
    departure_forest(inst, target, mode, universe, None).departures
}

/// Departures plus reconstructed witness journeys into the target.
pub struct DepartureForest {
    pub target: VertexId,
    pub departures: Vec<Departure>,
    /// First hop of v's witness journey to the target, original orientation.
    pub first_hops: Vec<Option<Hop>>,
}

impl DepartureForest {
    /// The witness journey v -> target, empty for the target itself.
    #[must_use]
    pub fn journey_from(&self, v: VertexId) -> Option<Journey> {
        if self.departures[v] == Departure::Never {
            return None;
        }
        let mut hops = Vec::new();
        let mut cur = v;
        while cur != self.target {
            let h = self.first_hops[cur]?;
            hops.push(h);
            cur = h.1;
        }
        Some(Journey::new(hops))
    }

    #[must_use]
    pub fn tree_edges(&self) -> BTreeSet<EdgeId> {
        self.first_hops
            .iter()
            .flatten()
            .map(|&(u, v, _)| EdgeId::new(u, v))
            .collect()
    }
}

/// Time-reversed mirror of `arrival_forest`: run the sweep on negated labels
/// from the target and flip everything back. `deadline` keeps only journeys
/// arriving at the target by that label.
pub fn departure_forest(
    inst: &impl TemporalInstance,
    target: VertexId,
    mode: Mode,
    universe: Universe<'_>,
    deadline: Option<Label>,
) -> DepartureForest {
    let n = inst.vertex_count();
    let mut triples = Vec::new();
    for e in all_edges(n) {
        if universe.contains(e) {
            for &l in inst.label_list(e) {
                triples.push((-l, e.u(), e.v()));
            }
        }
    }
    triples.sort_unstable();
    let (arr, pred) = sweep(n, &triples, target, mode, deadline.map(|d| -d));
    let departures = arr
        .into_iter()
        .map(|a| match a {
            Arrival::NegInf => Departure::PosInf,
            Arrival::At(l) => Departure::At(-l),
            Arrival::Never => Departure::Never,
        })
        .collect();
    // A reversed-time hop (y, x, -l) says the original journey from x starts
    // with the hop x -> y at label l.
    let first_hops = pred
        .into_iter()
        .map(|p| p.map(|(y, x, nl)| (x, y, -nl)))
        .collect();
    DepartureForest { target, departures, first_hops }
}

/// True iff every vertex reaches every other within the universe.
pub fn is_temporally_connected(inst: &impl TemporalInstance, mode: Mode, universe: Universe<'_>) -> bool {
    let n = inst.vertex_count();
    let triples = sorted_triples(inst, universe);
    (0..n).all(|source| {
        let (arr, _) = sweep(n, &triples, source, mode, None);
        arr.iter().all(|&a| a != Arrival::Never)
    })
}

/// Checks that the spanner belongs to this instance and preserves temporal
/// connectivity.
pub fn verify_spanner(
    inst: &impl TemporalInstance,
    s: &Spanner,
    mode: Mode,
) -> Result<bool, ReachError> {
    let instance = inst.content_hash();
    if s.instance_hash != instance {
        return Err(ReachError::InstanceMismatch { spanner: s.instance_hash, instance });
    }
    if let Some(&e) = s.edges.iter().find(|e| e.v() >= inst.vertex_count()) {
        return Err(ReachError::ForeignEdge { edge: e });
    }
    Ok(is_temporally_connected(inst, mode, Universe::Sub(&s.edges)))
}
