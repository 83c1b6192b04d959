//! Fireworks covers: route everything through the vertices that own many
//! minimum (or maximum) edges.
//!
//! Pointing every vertex along its minimum edge yields a digraph with
//! indegree at most one; untangling the few vertices with two or more
//! out-arcs turns it into disjoint in-trees whose sinks are called emitters.
//! Every vertex can push a journey into its sink through the sink's minimum
//! edge in at most two hops, so keeping the tree edges plus everything
//! incident to emitters spans the clique. Maximum edges mirror the whole
//! story (out-trees, collectors), and combining both sides needs only the
//! two tree edge sets plus the emitter-collector edges.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::core::{EdgeId, Label, SimpleClique, Side, VertexId, View};
use crate::reach::{Journey, Spanner};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FireworksError {
    #[error("vertex {vertex} has indegree {indegree}, arc set is not extreme-edge shaped")]
    MalformedArcSet { vertex: VertexId, indegree: usize },
    #[error("vertex {vertex} is a root of its tree and needs no journey")]
    IsSink { vertex: VertexId },
    #[error("vertex {vertex} is not covered by the decomposition")]
    NotInTree { vertex: VertexId },
}

/// Arcs of the minimum-edge digraph: (u, v) present when {u,v} is v's
/// minimum edge, minus the dropped side of each shared-minimum tie.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcSet {
    pub arcs: BTreeSet<(VertexId, VertexId)>,
}

/// Which extreme the decomposition is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeForm {
    /// In-trees toward emitters; arcs follow minimum edges.
    Minus,
    /// Out-trees from collectors; arcs follow maximum edges.
    Plus,
}

/// One directed tree arc in journey direction. `flipped` marks arcs the
/// transformation reversed; those are the only arcs not lying on their
/// root-side endpoint's extreme edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
    pub label: Label,
    pub flipped: bool,
}

/// Disjoint trees covering every vertex, each with a unique root (sink of an
/// in-tree, source of an out-tree). Directed root-ward paths are valid
/// strict journeys.
#[derive(Clone, Debug)]
pub struct TreeDecomposition {
    pub form: TreeForm,
    arcs: Vec<Arc>,
    /// For Minus: v's out-arc. For Plus: v's in-arc. None for roots and for
    /// vertices outside the decomposition's vertex set.
    parent: Vec<Option<usize>>,
    root_of: Vec<Option<VertexId>>,
    roots: BTreeSet<VertexId>,
}

impl TreeDecomposition {
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn roots(&self) -> &BTreeSet<VertexId> {
        &self.roots
    }

    #[must_use]
    pub fn is_root(&self, v: VertexId) -> bool {
        self.roots.contains(&v)
    }

    /// The root labeling v's tree, or None if v is outside the decomposition.
    #[must_use]
    pub fn tree_of(&self, v: VertexId) -> Option<VertexId> {
        self.root_of.get(v).copied().flatten()
    }

    /// The arc connecting v toward its root.
    #[must_use]
    pub fn parent_arc(&self, v: VertexId) -> Option<Arc> {
        self.parent.get(v).copied().flatten().map(|i| self.arcs[i])
    }

    /// Undirected edges used by the tree arcs.
    #[must_use]
    pub fn edges(&self) -> BTreeSet<EdgeId> {
        self.arcs.iter().map(|a| EdgeId::new(a.tail, a.head)).collect()
    }
}

/// Minimum- or maximum-edge digraph over a vertex subset, in working
/// orientation: one arc into each vertex along that vertex's extreme edge.
/// On a shared extreme the kept arc runs low id -> high id in journey
/// direction; for `Side::Max` the working orientation is reversed later, so
/// here the policy flips.
fn extreme_arcs(view: &View<'_>, side: Side) -> Vec<(VertexId, VertexId)> {
    let mut candidates: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for &v in view.vertices() {
        let e = view.extreme(v, side);
        candidates.insert((e.other(v), v));
    }
    candidates
        .iter()
        .copied()
        .filter(|&(a, b)| {
            if !candidates.contains(&(b, a)) {
                return true;
            }
            match side {
                Side::Min => a < b,
                Side::Max => a > b,
            }
        })
        .collect()
}

fn dir_label(view: &View<'_>, e: EdgeId, side: Side) -> Label {
    match side {
        Side::Min => view.label(e),
        Side::Max => -view.label(e),
    }
}

/// Untangles an extreme-edge digraph into disjoint trees. Works in the
/// direction where arcs enter the vertex owning the extreme; `side` controls
/// label comparisons and whether the result is flipped into Plus form.
fn untangle(
    view: &View<'_>,
    working: &[(VertexId, VertexId)],
    side: Side,
) -> Result<TreeDecomposition, FireworksError> {
    let n = view.clique().n();
    let mut indegree = vec![0usize; n];
    let mut out: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for &(t, h) in working {
        indegree[h] += 1;
        if indegree[h] > 1 {
            return Err(FireworksError::MalformedArcSet { vertex: h, indegree: indegree[h] });
        }
        out[t].push(h);
    }
    let is_sink: Vec<bool> = (0..n).map(|v| out[v].is_empty()).collect();

    // (tail, head, flipped) in working orientation. Vertices with several
    // out-arcs keep the one with the largest label; arcs toward sinks flip,
    // the rest vanish. Sink status is read off the input: indegree <= 1
    // means a flip can never feed a vertex someone else still points at,
    // so processing order does not matter.
    let mut transformed: Vec<(VertexId, VertexId, bool)> = Vec::new();
    for &v in view.vertices() {
        if out[v].len() < 2 {
            transformed.extend(out[v].iter().map(|&h| (v, h, false)));
            continue;
        }
        let &kept = out[v]
            .iter()
            .max_by_key(|&&h| dir_label(view, EdgeId::new(v, h), side))
            .expect("outdegree >= 2");
        transformed.push((v, kept, false));
        for &h in &out[v] {
            if h != kept && is_sink[h] {
                transformed.push((h, v, true));
            }
        }
    }

    let mut parent: Vec<Option<usize>> = vec![None; n];
    let arcs: Vec<Arc> = transformed
        .iter()
        .enumerate()
        .map(|(i, &(t, h, flipped))| {
            debug_assert!(parent[t].is_none(), "vertex {t} has two root-ward arcs");
            parent[t] = Some(i);
            let label = view.label(EdgeId::new(t, h));
            match side {
                Side::Min => Arc { tail: t, head: h, label, flipped },
                Side::Max => Arc { tail: h, head: t, label, flipped },
            }
        })
        .collect();

    let mut root_of: Vec<Option<VertexId>> = vec![None; n];
    let mut roots = BTreeSet::new();
    for &start in view.vertices() {
        if root_of[start].is_some() {
            continue;
        }
        let mut chain = vec![start];
        let mut cur = start;
        loop {
            match parent[cur] {
                Some(i) => {
                    let a = &transformed[i];
                    cur = a.1;
                    if chain.len() > n || cur == start {
                        // Extreme-edge arc sets cannot cycle; reject inputs
                        // that are not really extreme-edge shaped.
                        return Err(FireworksError::MalformedArcSet { vertex: cur, indegree: 1 });
                    }
                    if let Some(r) = root_of[cur] {
                        cur = r;
                        break;
                    }
                    chain.push(cur);
                }
                None => break,
            }
        }
        roots.insert(cur);
        for v in chain {
            root_of[v] = Some(cur);
        }
    }

    Ok(TreeDecomposition {
        form: match side {
            Side::Min => TreeForm::Minus,
            Side::Max => TreeForm::Plus,
        },
        arcs,
        parent,
        root_of,
        roots,
    })
}

/// The minimum-edge digraph of the whole clique in journey direction.
#[must_use]
pub fn build_min_digraph(c: &SimpleClique) -> ArcSet {
    let view = View::full(c);
    ArcSet { arcs: extreme_arcs(&view, Side::Min).into_iter().collect() }
}

/// Transforms a minimum-edge arc set into disjoint in-trees whose sinks are
/// the emitters.
pub fn to_in_trees(e: &ArcSet, c: &SimpleClique) -> Result<TreeDecomposition, FireworksError> {
    let view = View::full(c);
    let working: Vec<(VertexId, VertexId)> = e.arcs.iter().copied().collect();
    untangle(&view, &working, Side::Min)
}

/// A fireworks cover: the spanner, the tree decompositions that justify it,
/// and the emitter/collector sets (at most n/2 each).
#[derive(Clone, Debug)]
pub struct FireworksCover {
    pub spanner: Spanner,
    pub tminus: Option<TreeDecomposition>,
    pub tplus: Option<TreeDecomposition>,
    pub emitters: BTreeSet<VertexId>,
    pub collectors: BTreeSet<VertexId>,
}

/// Cover pieces over a vertex subset; the pipeline works on these directly
/// so that residual steps never pay for a full-instance spanner.
pub(crate) struct CoverParts {
    pub tminus: Option<TreeDecomposition>,
    pub tplus: Option<TreeDecomposition>,
    pub emitters: BTreeSet<VertexId>,
    pub collectors: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

fn tree_decomposition(view: &View<'_>, side: Side) -> TreeDecomposition {
    let working = extreme_arcs(view, side);
    untangle(view, &working, side).expect("extreme-edge arc sets always untangle")
}

pub(crate) fn forward_parts(view: &View<'_>) -> CoverParts {
    let t = tree_decomposition(view, Side::Min);
    let emitters = t.roots().clone();
    let mut edges = t.edges();
    for &s in &emitters {
        edges.extend(view.incident(s));
    }
    CoverParts { tminus: Some(t), tplus: None, emitters, collectors: BTreeSet::new(), edges }
}

pub(crate) fn backward_parts(view: &View<'_>) -> CoverParts {
    let t = tree_decomposition(view, Side::Max);
    let collectors = t.roots().clone();
    let mut edges = t.edges();
    for &s in &collectors {
        edges.extend(view.incident(s));
    }
    CoverParts { tminus: None, tplus: Some(t), emitters: BTreeSet::new(), collectors, edges }
}

pub(crate) fn bidirectional_parts(view: &View<'_>) -> CoverParts {
    let tminus = tree_decomposition(view, Side::Min);
    let tplus = tree_decomposition(view, Side::Max);
    let emitters = tminus.roots().clone();
    let collectors = tplus.roots().clone();
    let mut edges = tminus.edges();
    edges.extend(tplus.edges());
    for &x in &emitters {
        for &y in &collectors {
            if x != y {
                edges.insert(EdgeId::new(x, y));
            }
        }
    }
    CoverParts { tminus: Some(tminus), tplus: Some(tplus), emitters, collectors, edges }
}

fn cover(c: &SimpleClique, parts: CoverParts) -> FireworksCover {
    FireworksCover {
        spanner: Spanner::new(c, parts.edges),
        tminus: parts.tminus,
        tplus: parts.tplus,
        emitters: parts.emitters,
        collectors: parts.collectors,
    }
}

/// Tree edges plus everything incident to an emitter: at most
/// 3C(n,2)/4 + n edges.
#[must_use]
pub fn forward_cover(c: &SimpleClique) -> FireworksCover {
    cover(c, forward_parts(&View::full(c)))
}

/// Mirror of `forward_cover` on maximum edges; roots are collectors.
#[must_use]
pub fn backward_cover(c: &SimpleClique) -> FireworksCover {
    cover(c, backward_parts(&View::full(c)))
}

/// Both tree edge sets plus all emitter-collector edges: at most
/// n^2/4 + 2n edges.
#[must_use]
pub fn bidirectional_cover(c: &SimpleClique) -> FireworksCover {
    cover(c, bidirectional_parts(&View::full(c)))
}

/// The at-most-two-hop journey from `v` to deeper in its tree that arrives
/// through its head's minimum edge (Minus form), or symmetrically the
/// journey into `v` that leaves its tail through the tail's maximum edge
/// (Plus form). Roots have no such journey and report `IsSink`.
pub fn two_hop_extreme_journey(
    t: &TreeDecomposition,
    v: VertexId,
) -> Result<Journey, FireworksError> {
    if t.is_root(v) {
        return Err(FireworksError::IsSink { vertex: v });
    }
    let a = t.parent_arc(v).ok_or(FireworksError::NotInTree { vertex: v })?;
    let hops = match (t.form, a.flipped) {
        (TreeForm::Minus, false) => vec![(a.tail, a.head, a.label)],
        (TreeForm::Minus, true) => {
            // v's arc was flipped, so its head kept a later out-arc whose
            // edge is the next head's minimum.
            let b = t.parent_arc(a.head).expect("flip targets keep an out-arc");
            debug_assert!(!b.flipped && a.label < b.label);
            vec![(a.tail, a.head, a.label), (b.tail, b.head, b.label)]
        }
        (TreeForm::Plus, false) => vec![(a.tail, a.head, a.label)],
        (TreeForm::Plus, true) => {
            let b = t.parent_arc(a.tail).expect("flip targets keep an in-arc");
            debug_assert!(!b.flipped && b.label < a.label);
            vec![(b.tail, b.head, b.label), (a.tail, a.head, a.label)]
        }
    };
    Ok(Journey::new(hops))
}
