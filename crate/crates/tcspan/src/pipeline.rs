//! The full sparsification loop: fireworks, then either dismount a vertex
//! and start over, or sparsify the leftover bipartite core by layered
//! delegations.
//!
//! Each round computes a bidirectional fireworks cover of the current
//! vertex set. If some vertex is neither emitter nor collector it can be
//! dismounted with at most four edges (Case 1). Otherwise emitters and
//! collectors partition the vertices; if one of the extreme matchings fails
//! to be extreme on the collector side, a specific vertex is again 2-hop
//! dismountable (Case 2, violation). With both matchings extreme on both
//! sides the instance hands its emitter/collector core to the layered
//! delegation machinery and stops. Dismounting spends O(1) edges per vertex
//! and the core costs O(n log n), which bounds the whole spanner.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::core::{EdgeId, SimpleClique, Side, VertexId, View};
use crate::dismount::DismountStep;
use crate::fireworks::{self, two_hop_extreme_journey, FireworksCover, TreeDecomposition};
use crate::layered::{layered_delegation, BipartiteResidual, LayeredError};
use crate::reach::{Journey, Spanner};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error("fireworks cover does not fit the instance: {reason}")]
    InconsistentFireworks { reason: String },
    #[error(transparent)]
    Layered(#[from] LayeredError),
}

fn inconsistent(reason: impl Into<String>) -> PipelineError {
    PipelineError::InconsistentFireworks { reason: reason.into() }
}

/// What the current round does with the instance.
#[derive(Clone, Debug)]
pub enum ResidualClassification {
    /// A vertex outside both root sets; dismount it with its two-hop
    /// emission and reception journeys.
    Case1 { vertex: VertexId, step: DismountStep },
    /// Roots cover everything but a matching edge is not extreme at its
    /// collector; the vertex realizing the extreme is dismountable.
    Case2Dismount { vertex: VertexId, step: DismountStep },
    /// Roots cover everything and both matchings are extreme on both
    /// sides: the emitter/collector core is ready for delegation.
    Case2Residual { residual: BipartiteResidual },
}

/// Classifies an instance against its bidirectional fireworks cover.
pub fn classify_residual(
    c: &SimpleClique,
    fw: &FireworksCover,
) -> Result<ResidualClassification, PipelineError> {
    let view = View::full(c);
    let tm = fw.tminus.as_ref().ok_or_else(|| inconsistent("cover lacks the in-trees"))?;
    let tp = fw.tplus.as_ref().ok_or_else(|| inconsistent("cover lacks the out-trees"))?;
    classify_view(&view, tm, tp, &fw.emitters, &fw.collectors)
}

fn classify_view(
    view: &View<'_>,
    tm: &TreeDecomposition,
    tp: &TreeDecomposition,
    emitters: &BTreeSet<VertexId>,
    collectors: &BTreeSet<VertexId>,
) -> Result<ResidualClassification, PipelineError> {
    let n = view.len();
    let outside = view
        .vertices()
        .iter()
        .copied()
        .find(|v| !emitters.contains(v) && !collectors.contains(v));
    if let Some(v) = outside {
        let to_tree = |e: fireworks::FireworksError| inconsistent(e.to_string());
        let out_journey = two_hop_extreme_journey(tm, v).map_err(to_tree)?;
        let in_journey = two_hop_extreme_journey(tp, v).map_err(to_tree)?;
        let step = DismountStep { v, out_journey, in_journey };
        return Ok(ResidualClassification::Case1 { vertex: v, step });
    }

    // Roots cover every vertex, which forces an even split into disjoint
    // halves; anything else means the cover was not built from this view.
    if n % 2 != 0 || emitters.len() != n / 2 || collectors.len() != n / 2 {
        return Err(inconsistent(format!(
            "{} emitters and {} collectors cover all {} vertices",
            emitters.len(),
            collectors.len(),
            n
        )));
    }
    if emitters.intersection(collectors).next().is_some() {
        return Err(inconsistent("emitters and collectors overlap"));
    }

    // Emitter-side matching: each emitter's minimum edge, which in this
    // regime pairs it with a distinct collector.
    let mut sminus: BTreeMap<VertexId, EdgeId> = BTreeMap::new();
    let mut minus_partner: BTreeMap<VertexId, EdgeId> = BTreeMap::new();
    for &u in emitters {
        let e = view.extreme(u, Side::Min);
        let w = e.other(u);
        if !collectors.contains(&w) {
            return Err(inconsistent(format!("minimum edge {e} of emitter {u} misses the collectors")));
        }
        if minus_partner.insert(w, e).is_some() {
            return Err(inconsistent(format!("collector {w} is the minimum partner of two emitters")));
        }
        sminus.insert(u, e);
    }
    // Collector-side matching via maxima, keyed both ways.
    let mut splus: BTreeMap<VertexId, EdgeId> = BTreeMap::new();
    let mut plus_at_collector: BTreeMap<VertexId, EdgeId> = BTreeMap::new();
    for &c in collectors {
        let e = view.extreme(c, Side::Max);
        let w = e.other(c);
        if !emitters.contains(&w) {
            return Err(inconsistent(format!("maximum edge {e} of collector {c} misses the emitters")));
        }
        if splus.insert(w, e).is_some() {
            return Err(inconsistent(format!("emitter {w} is the maximum partner of two collectors")));
        }
        plus_at_collector.insert(c, e);
    }

    // Violation scan, minimum side first: is each emitter's matching edge
    // also minimum at its collector among the crossing edges?
    for (&u, &e) in &sminus {
        let v = e.other(u);
        let (best_label, best_u) = emitters
            .iter()
            .map(|&u2| (view.label(EdgeId::new(u2, v)), u2))
            .min()
            .expect("emitters are nonempty");
        if best_label < view.label(e) {
            let up = EdgeId::new(best_u, v);
            let out_journey =
                Journey::new(vec![(best_u, v, view.label(up)), (v, u, view.label(e))]);
            let back = splus[&best_u];
            let c2 = back.other(best_u);
            let in_journey = Journey::new(vec![(c2, best_u, view.label(back))]);
            let step = DismountStep { v: best_u, out_journey, in_journey };
            return Ok(ResidualClassification::Case2Dismount { vertex: best_u, step });
        }
    }
    // Mirror scan on the maximum side, dismounting a collector.
    for (&c, &e) in &plus_at_collector {
        let w = e.other(c);
        let (best_label, best_c) = collectors
            .iter()
            .map(|&c2| (view.label(EdgeId::new(w, c2)), c2))
            .max()
            .expect("collectors are nonempty");
        if best_label > view.label(e) {
            let up = EdgeId::new(w, best_c);
            let in_journey =
                Journey::new(vec![(c, w, view.label(e)), (w, best_c, view.label(up))]);
            let down = minus_partner[&best_c];
            let u2 = down.other(best_c);
            let out_journey = Journey::new(vec![(best_c, u2, view.label(down))]);
            let step = DismountStep { v: best_c, out_journey, in_journey };
            return Ok(ResidualClassification::Case2Dismount { vertex: best_c, step });
        }
    }

    let mut labels = BTreeMap::new();
    for &u in emitters {
        for &c in collectors {
            let e = EdgeId::new(u, c);
            labels.insert(e, view.label(e));
        }
    }
    let residual = BipartiteResidual::new(
        emitters.iter().copied().collect(),
        collectors.iter().copied().collect(),
        labels,
        sminus,
        splus,
    )?;
    Ok(ResidualClassification::Case2Residual { residual })
}

/// How the spanner was assembled: how many vertices were dismounted (n1),
/// how many remained when the loop stopped (n2), and how many edges each
/// phase selected before deduplication.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PipelineReport {
    pub n1: usize,
    pub n2: usize,
    pub dismount_edges: usize,
    pub residual_edges: usize,
    pub base_edges: usize,
}

/// Builds an O(n log n) spanner: dismounts vertices while the fireworks
/// cover leaves someone outside or a matching violation exists, then keeps
/// the layered delegation of the residual core, or simply everything once
/// four or fewer vertices remain.
pub fn spanner_nlogn(c: &SimpleClique) -> Result<(Spanner, PipelineReport), PipelineError> {
    let mut view = View::full(c);
    let mut edges: BTreeSet<EdgeId> = BTreeSet::new();
    let mut dismount_edges: BTreeSet<EdgeId> = BTreeSet::new();
    let mut report = PipelineReport::default();
    loop {
        if view.len() <= 4 {
            let base: Vec<EdgeId> = view.edges().collect();
            report.base_edges = base.len();
            report.n2 = view.len();
            edges.extend(base);
            break;
        }
        let parts = fireworks::bidirectional_parts(&view);
        let tm = parts.tminus.as_ref().expect("bidirectional parts carry both trees");
        let tp = parts.tplus.as_ref().expect("bidirectional parts carry both trees");
        match classify_view(&view, tm, tp, &parts.emitters, &parts.collectors)? {
            ResidualClassification::Case1 { vertex, step }
            | ResidualClassification::Case2Dismount { vertex, step } => {
                dismount_edges.extend(step.out_journey.edges());
                dismount_edges.extend(step.in_journey.edges());
                report.n1 += 1;
                view = view.without(vertex);
            }
            ResidualClassification::Case2Residual { residual } => {
                let selection = layered_delegation(&residual)?;
                report.residual_edges = selection.len();
                report.n2 = view.len();
                edges.extend(selection);
                break;
            }
        }
    }
    report.dismount_edges = dismount_edges.len();
    edges.extend(dismount_edges);
    debug_assert_eq!(report.n1 + report.n2, c.n());
    Ok((Spanner::new(c, edges), report))
}
