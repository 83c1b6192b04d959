//! Vertices, canonical edges, and labelings of temporal cliques.
//!
//! Everything downstream works on complete graphs whose edges carry integer
//! time labels. A labeling is *simple* when every edge has exactly one label
//! and no two edges sharing a vertex have the same label (local injectivity).
//! Multi-labeled cliques are the general input form and get reduced to simple
//! ones before any spanner construction runs.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;
pub type Label = i64;

/// Canonical undirected edge: endpoints stored with `u < v`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "(VertexId, VertexId)", try_from = "(VertexId, VertexId)")]
pub struct EdgeId {
    u: VertexId,
    v: VertexId,
}

impl EdgeId {
    /// Builds the canonical edge between two distinct vertices, in either order.
    ///
    /// Panics if `a == b`; loops never occur in a clique.
    #[must_use]
    pub fn new(a: VertexId, b: VertexId) -> EdgeId {
        assert!(a != b, "edge endpoints must be distinct, got {a}");
        EdgeId {
            u: a.min(b),
            v: a.max(b),
        }
    }

    #[must_use]
    pub const fn u(self) -> VertexId {
        self.u
    }

    #[must_use]
    pub const fn v(self) -> VertexId {
        self.v
    }

    #[must_use]
    pub const fn endpoints(self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }

    #[must_use]
    pub fn is_incident(self, w: VertexId) -> bool {
        self.u == w || self.v == w
    }

    /// The endpoint that is not `w`. Panics if `w` is not an endpoint.
    #[must_use]
    pub fn other(self, w: VertexId) -> VertexId {
        if self.u == w {
            self.v
        } else if self.v == w {
            self.u
        } else {
            panic!("vertex {w} is not an endpoint of {self}")
        }
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

impl fmt::Debug for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

impl From<EdgeId> for (VertexId, VertexId) {
    fn from(e: EdgeId) -> (VertexId, VertexId) {
        (e.u, e.v)
    }
}

impl TryFrom<(VertexId, VertexId)> for EdgeId {
    type Error = String;

    fn try_from((a, b): (VertexId, VertexId)) -> Result<EdgeId, String> {
        if a == b {
            Err(format!("edge endpoints must be distinct, got {a}"))
        } else {
            Ok(EdgeId::new(a, b))
        }
    }
}

/// Number of edges of a clique on `n` vertices.
#[must_use]
pub const fn edge_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// All edges of a clique on `n` vertices in lexicographic order:
/// 0-1, 0-2, ..., 0-(n-1), 1-2, ...
pub fn all_edges(n: usize) -> impl Iterator<Item = EdgeId> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| EdgeId { u, v }))
}

/// Position of `e` in the lexicographic edge order of a clique on `n` vertices.
fn edge_index(n: usize, e: EdgeId) -> usize {
    debug_assert!(e.v < n, "edge {e} out of range for n={n}");
    e.u * (2 * n - e.u - 1) / 2 + (e.v - e.u - 1)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("edge {edge} has an endpoint outside 0..{n}")]
    InvalidVertex { edge: EdgeId, n: usize },
    #[error("edge {edge} appears more than once")]
    DuplicateEdge { edge: EdgeId },
    #[error("edge {edge} is missing from the labeling")]
    MissingEdge { edge: EdgeId },
    #[error("edges {first} and {second} at vertex {vertex} share label {label}")]
    LocalLabelCollision {
        vertex: VertexId,
        first: EdgeId,
        second: EdgeId,
        label: Label,
    },
    #[error("edge {edge} has an empty label set")]
    EmptyLabels { edge: EdgeId },
    #[error("vertex {vertex} has degree {degree}, rank {rank} is out of bounds")]
    RankOutOfBounds {
        vertex: VertexId,
        rank: usize,
        degree: usize,
    },
}

/// A clique where every edge carries a non-empty set of labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiLabelClique {
    n: usize,
    // Indexed by lexicographic edge position; each list sorted ascending, no repeats.
    labels: Vec<Vec<Label>>,
}

impl MultiLabelClique {
    /// Validates that `entries` covers every edge of K_n exactly once with a
    /// non-empty label set. Repeated labels within one edge collapse (sets).
    ///
    /// Panics if `n < 2`.
    pub fn new(n: usize, entries: &[(EdgeId, Vec<Label>)]) -> Result<MultiLabelClique, CoreError> {
        assert!(n >= 2, "a clique needs at least two vertices, got n={n}");
        let mut slots: Vec<Option<Vec<Label>>> = vec![None; edge_count(n)];
        for (e, ls) in entries {
            if e.v >= n {
                return Err(CoreError::InvalidVertex { edge: *e, n });
            }
            let slot = &mut slots[edge_index(n, *e)];
            if slot.is_some() {
                return Err(CoreError::DuplicateEdge { edge: *e });
            }
            if ls.is_empty() {
                return Err(CoreError::EmptyLabels { edge: *e });
            }
            for &l in ls {
                assert!(l != Label::MIN, "label {} is not supported", Label::MIN);
            }
            let mut ls = ls.clone();
            ls.sort_unstable();
            ls.dedup();
            *slot = Some(ls);
        }
        let mut labels = Vec::with_capacity(slots.len());
        for (e, slot) in all_edges(n).zip(slots) {
            match slot {
                Some(ls) => labels.push(ls),
                None => return Err(CoreError::MissingEdge { edge: e }),
            }
        }
        Ok(MultiLabelClique { n, labels })
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn labels(&self, e: EdgeId) -> &[Label] {
        &self.labels[edge_index(self.n, e)]
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        all_edges(self.n)
    }
}

/// A simply labeled clique: one label per edge, locally injective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleClique {
    n: usize,
    // Indexed by lexicographic edge position.
    labels: Vec<Label>,
}

/// Validates and builds a simple labeling of K_n from an edge/label list.
///
/// Every edge must appear exactly once and no two edges meeting at a vertex
/// may share a label. Panics if `n < 2`.
pub fn build_simple_clique(n: usize, entries: &[(EdgeId, Label)]) -> Result<SimpleClique, CoreError> {
    assert!(n >= 2, "a clique needs at least two vertices, got n={n}");
    let mut slots: Vec<Option<Label>> = vec![None; edge_count(n)];
    for &(e, l) in entries {
        if e.v >= n {
            return Err(CoreError::InvalidVertex { edge: e, n });
        }
        assert!(l != Label::MIN, "label {} is not supported", Label::MIN);
        let slot = &mut slots[edge_index(n, e)];
        if slot.is_some() {
            return Err(CoreError::DuplicateEdge { edge: e });
        }
        *slot = Some(l);
    }
    let mut labels = Vec::with_capacity(slots.len());
    for (e, slot) in all_edges(n).zip(slots) {
        match slot {
            Some(l) => labels.push(l),
            None => return Err(CoreError::MissingEdge { edge: e }),
        }
    }
    let c = SimpleClique { n, labels };
    for v in 0..n {
        let mut seen: Vec<(Label, EdgeId)> = c.incident(v).map(|e| (c.label(e), e)).collect();
        seen.sort_unstable();
        for w in seen.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(CoreError::LocalLabelCollision {
                    vertex: v,
                    first: w[0].1,
                    second: w[1].1,
                    label: w[0].0,
                });
            }
        }
    }
    Ok(c)
}

impl SimpleClique {
    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn edge_count(&self) -> usize {
        self.labels.len()
    }

    #[must_use]
    pub fn label(&self, e: EdgeId) -> Label {
        self.labels[edge_index(self.n, e)]
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        all_edges(self.n)
    }

    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        let n = self.n;
        (0..n).filter(move |&w| w != v).map(move |w| EdgeId::new(v, w))
    }

    /// Edge/label pairs in lexicographic edge order.
    pub fn labeled_edges(&self) -> impl Iterator<Item = (EdgeId, Label)> + '_ {
        self.edges().zip(self.labels.iter().copied())
    }
}

/// Read-only access shared by simple and multi-labeled cliques; this is what
/// the reachability sweeps run on.
pub trait TemporalInstance {
    fn vertex_count(&self) -> usize;

    /// Labels of `e`, sorted ascending. Length 1 for simple cliques.
    fn label_list(&self, e: EdgeId) -> &[Label];

    /// FNV-1a over the canonical structural encoding; identifies the instance
    /// in spanner artifacts independently of the serialization that carried it.
    fn content_hash(&self) -> u64 {
        let mut h = Fnv::new();
        h.write_u64(self.vertex_count() as u64);
        for e in all_edges(self.vertex_count()) {
            let ls = self.label_list(e);
            h.write_u64(ls.len() as u64);
            for &l in ls {
                h.write_i64(l);
            }
        }
        h.finish()
    }
}

impl TemporalInstance for SimpleClique {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn label_list(&self, e: EdgeId) -> &[Label] {
        let i = edge_index(self.n, e);
        std::slice::from_ref(&self.labels[i])
    }
}

impl TemporalInstance for MultiLabelClique {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn label_list(&self, e: EdgeId) -> &[Label] {
        self.labels(e)
    }
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Fnv {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn write_u64(&mut self, x: u64) {
        for b in x.to_le_bytes() {
            self.0 = (self.0 ^ u64::from(b)).wrapping_mul(0x100_0000_01b3);
        }
    }

    fn write_i64(&mut self, x: i64) {
        self.write_u64(x as u64);
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Min,
    Max,
}

/// The incident edge of `v` with the smallest (`Side::Min`) or largest
/// (`Side::Max`) label. Well defined by local injectivity.
#[must_use]
pub fn extreme_edge(c: &SimpleClique, v: VertexId, side: Side) -> EdgeId {
    let pick = c
        .incident(v)
        .map(|e| (c.label(e), e))
        .reduce(|best, cur| match side {
            Side::Min => best.min(cur),
            Side::Max => best.max(cur),
        });
    pick.expect("clique has n >= 2, every vertex has an incident edge").1
}

/// Per-vertex ascending rank order of incident edges over a designated edge
/// universe (not necessarily the whole clique). Ranks are 1-based: rank 1 is
/// the smallest label at the vertex, rank `degree(v)` the largest.
#[derive(Clone, Debug)]
pub struct RankTable {
    per_vertex: Vec<Vec<(Label, EdgeId)>>,
}

impl RankTable {
    pub fn new(n: usize, universe: impl IntoIterator<Item = (EdgeId, Label)>) -> RankTable {
        let mut per_vertex: Vec<Vec<(Label, EdgeId)>> = vec![Vec::new(); n];
        for (e, l) in universe {
            per_vertex[e.u()].push((l, e));
            per_vertex[e.v()].push((l, e));
        }
        for list in &mut per_vertex {
            list.sort_unstable();
        }
        RankTable { per_vertex }
    }

    #[must_use]
    pub fn degree(&self, v: VertexId) -> usize {
        self.per_vertex[v].len()
    }

    /// 1-based rank of `e` at `v`, or None if `e` is not in the universe at `v`.
    #[must_use]
    pub fn rank_of(&self, v: VertexId, e: EdgeId) -> Option<usize> {
        self.per_vertex[v].iter().position(|&(_, x)| x == e).map(|i| i + 1)
    }

    /// Universe edges at `v` with their labels, ascending.
    pub fn edges_at(&self, v: VertexId) -> impl Iterator<Item = (EdgeId, Label)> + '_ {
        self.per_vertex[v].iter().map(|&(l, e)| (e, l))
    }
}

/// The rank-`i` edge at `v` (1-based).
pub fn rank_edge(t: &RankTable, v: VertexId, i: usize) -> Result<EdgeId, CoreError> {
    let degree = t.degree(v);
    if i == 0 || i > degree {
        return Err(CoreError::RankOutOfBounds { vertex: v, rank: i, degree });
    }
    Ok(t.per_vertex[v][i - 1].1)
}

/// A clique restricted to a subset of its vertices, keeping original vertex
/// ids and labels. The recursive constructions peel vertices off one at a
/// time and this avoids renumbering anything.
#[derive(Clone, Debug)]
pub(crate) struct View<'a> {
    c: &'a SimpleClique,
    verts: Vec<VertexId>,
}

impl<'a> View<'a> {
    pub(crate) fn full(c: &'a SimpleClique) -> View<'a> {
        View { c, verts: (0..c.n()).collect() }
    }

    pub(crate) fn clique(&self) -> &'a SimpleClique {
        self.c
    }

    pub(crate) fn len(&self) -> usize {
        self.verts.len()
    }

    pub(crate) fn vertices(&self) -> &[VertexId] {
        &self.verts
    }

    pub(crate) fn contains(&self, v: VertexId) -> bool {
        self.verts.binary_search(&v).is_ok()
    }

    pub(crate) fn label(&self, e: EdgeId) -> Label {
        debug_assert!(self.contains(e.u()) && self.contains(e.v()));
        self.c.label(e)
    }

    /// Active edges in lexicographic order.
    pub(crate) fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.verts.iter().enumerate().flat_map(move |(i, &u)| {
            self.verts[i + 1..].iter().map(move |&v| EdgeId::new(u, v))
        })
    }

    pub(crate) fn incident(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        debug_assert!(self.contains(v));
        self.verts.iter().filter(move |&&w| w != v).map(move |&w| EdgeId::new(v, w))
    }

    pub(crate) fn extreme(&self, v: VertexId, side: Side) -> EdgeId {
        let pick = self
            .incident(v)
            .map(|e| (self.c.label(e), e))
            .reduce(|best, cur| match side {
                Side::Min => best.min(cur),
                Side::Max => best.max(cur),
            });
        pick.expect("view has at least two vertices").1
    }

    pub(crate) fn without(&self, v: VertexId) -> View<'a> {
        View {
            c: self.c,
            verts: self.verts.iter().copied().filter(|&w| w != v).collect(),
        }
    }
}
