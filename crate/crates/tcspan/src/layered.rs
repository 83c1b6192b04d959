//! Sparsification of the emitter/collector residual by layered delegations.
//!
//! After the fireworks phase the hard part of an instance is a complete
//! bipartite graph between k emitters and k collectors. Emitters are
//! eliminated in rounds: in round j each doomed emitter delegates to a
//! survivor through a two-hop journey whose ranks live in a doubling
//! interval, keeps direct edges to the few collectors the delegate has
//! already passed, and relies on the delegate for the rest. Halving the
//! alive set every round leaves eight finalists that keep everything, for
//! Theta(k log k) edges overall.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::core::{rank_edge, EdgeId, Label, RankTable, TemporalInstance, VertexId};
use crate::reach::Journey;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayeredError {
    #[error("not a legal bipartite residual: {reason}")]
    InvalidResidual { reason: String },
    #[error("delegation stalled with {remaining} emitters still to eliminate")]
    SplitStalled { remaining: usize },
}

fn invalid(reason: impl Into<String>) -> LayeredError {
    LayeredError::InvalidResidual { reason: reason.into() }
}

/// A labeled complete bipartite graph between k emitters and k collectors,
/// together with the two perfect matchings that anchor it: each emitter's
/// minimum edge is also minimum at its collector, and likewise for maxima.
#[derive(Clone, Debug)]
pub struct BipartiteResidual {
    emitters: Vec<VertexId>,
    collectors: Vec<VertexId>,
    labels: BTreeMap<EdgeId, Label>,
    sminus: BTreeMap<VertexId, EdgeId>,
    splus: BTreeMap<VertexId, EdgeId>,
    ranks: RankTable,
    n: usize,
}

impl BipartiteResidual {
    pub fn new(
        emitters: Vec<VertexId>,
        collectors: Vec<VertexId>,
        labels: BTreeMap<EdgeId, Label>,
        sminus: BTreeMap<VertexId, EdgeId>,
        splus: BTreeMap<VertexId, EdgeId>,
    ) -> Result<BipartiteResidual, LayeredError> {
        let mut emitters = emitters;
        let mut collectors = collectors;
        emitters.sort_unstable();
        emitters.dedup();
        collectors.sort_unstable();
        collectors.dedup();
        let k = emitters.len();
        if k == 0 || collectors.len() != k {
            return Err(invalid(format!(
                "need equal nonempty sides, got {k} emitters and {} collectors",
                collectors.len()
            )));
        }
        if emitters.iter().any(|u| collectors.binary_search(u).is_ok()) {
            return Err(invalid("emitters and collectors overlap"));
        }

        if labels.len() != k * k {
            return Err(invalid(format!("expected {} edges, got {}", k * k, labels.len())));
        }
        for (&e, _) in &labels {
            let ok = (emitters.binary_search(&e.u()).is_ok()
                && collectors.binary_search(&e.v()).is_ok())
                || (emitters.binary_search(&e.v()).is_ok()
                    && collectors.binary_search(&e.u()).is_ok());
            if !ok {
                return Err(invalid(format!("edge {e} does not cross the partition")));
            }
        }
        let distinct: BTreeSet<Label> = labels.values().copied().collect();
        if distinct.len() != labels.len() {
            return Err(invalid("labels are not pairwise distinct"));
        }

        let n = 1 + emitters
            .iter()
            .chain(collectors.iter())
            .copied()
            .max()
            .expect("sides are nonempty");
        let ranks = RankTable::new(n, labels.iter().map(|(&e, &l)| (e, l)));

        for (name, matching, extreme_rank) in
            [("S-", &sminus, 1), ("S+", &splus, k)]
        {
            let keys: Vec<VertexId> = matching.keys().copied().collect();
            if keys != emitters {
                return Err(invalid(format!("{name} is not keyed by the emitters")));
            }
            let mut seen = BTreeSet::new();
            for (&u, &e) in matching {
                if e.u() != u && e.v() != u {
                    return Err(invalid(format!("{name} edge {e} is not incident to {u}")));
                }
                let c = e.other(u);
                if !seen.insert(c) {
                    return Err(invalid(format!("{name} reuses collector {c}")));
                }
                let Some(&l) = labels.get(&e) else {
                    return Err(invalid(format!("{name} edge {e} is not in the graph")));
                };
                if ranks.rank_of(u, e) != Some(extreme_rank) {
                    return Err(invalid(format!(
                        "{name} edge {e} does not have rank {extreme_rank} at emitter {u}"
                    )));
                }
                let at_collector = ranks.edges_at(c).map(|(_, lab)| lab);
                let extreme_ok = if extreme_rank == 1 {
                    l <= at_collector.min().expect("collector has edges")
                } else {
                    l >= at_collector.max().expect("collector has edges")
                };
                if !extreme_ok {
                    return Err(invalid(format!("{name} edge {e} is not extreme at {c}")));
                }
            }
        }

        Ok(BipartiteResidual { emitters, collectors, labels, sminus, splus, ranks, n })
    }

    pub fn k(&self) -> usize {
        self.emitters.len()
    }

    pub fn emitters(&self) -> &[VertexId] {
        &self.emitters
    }

    pub fn collectors(&self) -> &[VertexId] {
        &self.collectors
    }

    pub fn label(&self, e: EdgeId) -> Label {
        self.labels[&e]
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, Label)> + '_ {
        self.labels.iter().map(|(&e, &l)| (e, l))
    }

    /// 1-based position of `e` among the edges at emitter `u`, by label.
    pub fn rank_at(&self, u: VertexId, e: EdgeId) -> usize {
        self.ranks.rank_of(u, e).expect("edge is in the residual")
    }

    pub fn matching_minus(&self) -> &BTreeMap<VertexId, EdgeId> {
        &self.sminus
    }

    pub fn matching_plus(&self) -> &BTreeMap<VertexId, EdgeId> {
        &self.splus
    }

    fn edge_of_rank(&self, u: VertexId, i: usize) -> EdgeId {
        rank_edge(&self.ranks, u, i).expect("rank is in range")
    }

    /// Edges at `v` ascending by label, i.e. by rank.
    fn edges_at(&self, v: VertexId) -> impl Iterator<Item = (EdgeId, Label)> + '_ {
        self.ranks.edges_at(v)
    }
}

impl TemporalInstance for BipartiteResidual {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn label_list(&self, e: EdgeId) -> &[Label] {
        self.labels.get(&e).map_or(&[], std::slice::from_ref)
    }
}

/// Closed rank intervals [lo, hi], doubling in width, consumed one per
/// delegation round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalSchedule {
    pub intervals: Vec<(usize, usize)>,
}

/// Interval j covers ranks [2^(j+2)-7, 2^(j+3)-8], clipped to k; eight or
/// fewer emitters need no rounds at all.
#[must_use]
pub fn rank_intervals(k: usize) -> IntervalSchedule {
    assert!(k >= 1);
    if k <= 8 {
        return IntervalSchedule { intervals: Vec::new() };
    }
    let jmax = k.next_power_of_two().ilog2() as usize - 3;
    let intervals = (1..=jmax)
        .map(|j| ((1usize << (j + 2)) - 7, ((1usize << (j + 3)) - 8).min(k)))
        .collect();
    IntervalSchedule { intervals }
}

/// One eliminated emitter: it reaches `delegate` by the two-hop `journey`
/// and afterwards rides the delegate's selection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delegation {
    pub emitter: VertexId,
    pub delegate: VertexId,
    pub journey: Journey,
}

/// Outcome of one greedy round: who was eliminated (with their journeys)
/// and who stays alive.
#[derive(Clone, Debug)]
pub struct SplitResult {
    pub eliminated: Vec<Delegation>,
    pub survivors: BTreeSet<VertexId>,
}

/// Greedily splits the alive emitters until exactly `target_survivors`
/// remain. Each batch picks the collector of maximum degree (ties to the
/// smaller id) in the graph of alive emitters' edges with ranks inside
/// `interval`; the incident emitter with the largest label becomes the
/// delegate and survives, the rest delegate through that collector. The
/// final batch eliminates only as many as still needed, by ascending id.
pub fn split_alive(
    r: &BipartiteResidual,
    alive: &BTreeSet<VertexId>,
    interval: (usize, usize),
    target_survivors: usize,
) -> Result<SplitResult, LayeredError> {
    assert!(target_survivors < alive.len());
    let (lo, hi) = interval;
    assert!(1 <= lo && lo <= hi && hi <= r.k());

    let mut incident: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    for &u in alive {
        for i in lo..=hi {
            let e = r.edge_of_rank(u, i);
            incident.entry(e.other(u)).or_default().insert(u);
        }
    }

    let need = alive.len() - target_survivors;
    let mut eliminated: Vec<Delegation> = Vec::new();
    let mut survivors: BTreeSet<VertexId> = BTreeSet::new();
    let mut pool: BTreeSet<VertexId> = alive.clone();
    while eliminated.len() < need {
        let (degree, c) = incident
            .iter()
            .map(|(&c, us)| (us.intersection(&pool).count(), Reverse(c)))
            .max()
            .map(|(d, Reverse(c))| (d, c))
            .expect("alive emitters have interval edges");
        if degree < 2 {
            return Err(LayeredError::SplitStalled { remaining: need - eliminated.len() });
        }
        let batch: Vec<VertexId> =
            incident[&c].intersection(&pool).copied().collect();
        let &delegate = batch
            .iter()
            .max_by_key(|&&u| r.label(EdgeId::new(u, c)))
            .expect("batch is nonempty");
        pool.remove(&delegate);
        survivors.insert(delegate);
        let out_label = r.label(EdgeId::new(c, delegate));
        for &u in batch.iter().filter(|&&u| u != delegate).take(need - eliminated.len()) {
            let in_label = r.label(EdgeId::new(u, c));
            debug_assert!(in_label < out_label);
            pool.remove(&u);
            eliminated.push(Delegation {
                emitter: u,
                delegate,
                journey: Journey::new(vec![(u, c, in_label), (c, delegate, out_label)]),
            });
        }
    }
    survivors.extend(pool);
    debug_assert_eq!(survivors.len(), target_survivors);
    Ok(SplitResult { eliminated, survivors })
}

/// One round's haul: the two-hop journey edges and the direct edges kept by
/// eliminated emitters.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub interval: (usize, usize),
    pub journey_edges: BTreeSet<EdgeId>,
    pub direct_edges: BTreeSet<EdgeId>,
    pub delegations: Vec<Delegation>,
}

/// Everything `layered_delegation` keeps, broken down for inspection.
#[derive(Clone, Debug)]
pub struct LayeredSelection {
    pub steps: Vec<StepRecord>,
    pub finalists: BTreeSet<VertexId>,
    pub finalist_edges: BTreeSet<EdgeId>,
    pub matching_edges: BTreeSet<EdgeId>,
}

impl LayeredSelection {
    #[must_use]
    pub fn all_edges(&self) -> BTreeSet<EdgeId> {
        let mut out = self.matching_edges.clone();
        for s in &self.steps {
            out.extend(&s.journey_edges);
            out.extend(&s.direct_edges);
        }
        out.extend(&self.finalist_edges);
        out
    }
}

/// Runs the full delegation schedule. Round 1 reduces the alive set to the
/// largest power of two strictly below k, later rounds halve it, and the at
/// most eight finalists keep all their edges. Per eliminated emitter in
/// round j: the two journey edges, plus a direct edge to every collector the
/// delegate ranks strictly below the journey's arrival edge.
pub fn layered_selection(r: &BipartiteResidual) -> Result<LayeredSelection, LayeredError> {
    let k = r.k();
    let schedule = rank_intervals(k);
    let mut alive: BTreeSet<VertexId> = r.emitters.iter().copied().collect();
    let mut steps = Vec::new();
    let mut target = if k.is_power_of_two() { k / 2 } else { 1usize << k.ilog2() };
    for (step, &interval) in schedule.intervals.iter().enumerate() {
        let j = step + 1;
        let split = split_alive(r, &alive, interval, target)?;
        let mut journey_edges = BTreeSet::new();
        let mut direct_edges = BTreeSet::new();
        for d in &split.eliminated {
            let (_, c, in_label) = d.journey.hops[0];
            journey_edges.insert(EdgeId::new(d.emitter, c));
            let arrival = EdgeId::new(c, d.delegate);
            journey_edges.insert(arrival);
            debug_assert_eq!(r.label(EdgeId::new(d.emitter, c)), in_label);
            let i = r.rank_at(d.delegate, arrival);
            debug_assert!((interval.0..=interval.1).contains(&i));
            let mut cost = 2usize;
            for (passed, _) in r.edges_at(d.delegate).take(i - 1) {
                direct_edges.insert(EdgeId::new(d.emitter, passed.other(d.delegate)));
                cost += 1;
            }
            assert!(cost <= 1 << (j + 3), "round {j} spent {cost} edges on one emitter");
        }
        steps.push(StepRecord {
            interval,
            journey_edges,
            direct_edges,
            delegations: split.eliminated,
        });
        alive = split.survivors;
        target /= 2;
    }

    let mut finalist_edges = BTreeSet::new();
    for &u in &alive {
        for &c in &r.collectors {
            finalist_edges.insert(EdgeId::new(u, c));
        }
    }
    let matching_edges = r.sminus.values().chain(r.splus.values()).copied().collect();
    Ok(LayeredSelection { steps, finalists: alive, finalist_edges, matching_edges })
}

/// The delegation spanner of the residual: matchings, per-round journey and
/// direct edges, and every edge of the finalists.
pub fn layered_delegation(r: &BipartiteResidual) -> Result<BTreeSet<EdgeId>, LayeredError> {
    Ok(layered_selection(r)?.all_edges())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::random_residual;
    use crate::reach::{earliest_arrivals, Arrival, Mode, Universe};
    use proptest::prelude::*;

    fn e(a: VertexId, b: VertexId) -> EdgeId {
        EdgeId::new(a, b)
    }

    /// Every emitter must reach every collector strictly inside the edge set.
    fn reaches_all_collectors(r: &BipartiteResidual, edges: &BTreeSet<EdgeId>) -> bool {
        r.emitters().iter().all(|&u| {
            let arr = earliest_arrivals(r, u, Mode::Strict, Universe::Sub(edges), None);
            r.collectors().iter().all(|&c| arr[c] != Arrival::Never)
        })
    }

    #[test]
    fn interval_schedule_examples() {
        assert_eq!(rank_intervals(128).intervals, vec![(1, 8), (9, 24), (25, 56), (57, 120)]);
        assert_eq!(rank_intervals(8).intervals, vec![]);
        assert_eq!(rank_intervals(1).intervals, vec![]);
        assert_eq!(rank_intervals(16).intervals, vec![(1, 8)]);
        assert_eq!(rank_intervals(9).intervals, vec![(1, 8)]);
    }

    #[test]
    fn interval_schedule_bookkeeping() {
        for k in 1..=(1usize << 20) {
            let s = rank_intervals(k);
            if k <= 8 {
                assert!(s.intervals.is_empty());
                continue;
            }
            let mut expect_lo = 1;
            for &(lo, hi) in &s.intervals {
                assert_eq!(lo, expect_lo, "k={k}");
                assert!(lo <= hi && hi <= k, "k={k}");
                expect_lo = hi + 1;
            }
            if k.is_power_of_two() {
                assert_eq!(s.intervals.last().unwrap().1, k - 8, "k={k}");
            }
        }
    }

    /// A hand-shaped k=16 residual where every collector has degree exactly
    /// 8 in round 1: emitter i's rank 1..8 edges go to collectors i, i+2,
    /// ..., i+14 (mod 16).
    fn uniform_degree_residual() -> BipartiteResidual {
        let k = 16;
        let mut labels = BTreeMap::new();
        let mut sminus = BTreeMap::new();
        let mut splus = BTreeMap::new();
        for i in 0..k {
            let mut targets: Vec<usize> = (0..8).map(|s| (i + 2 * s) % k).collect();
            let used: BTreeSet<usize> = targets.iter().copied().collect();
            let tau = (i + 1) % k;
            targets.extend((0..k).filter(|t| !used.contains(t) && *t != tau));
            targets.push(tau);
            for (rank0, &t) in targets.iter().enumerate() {
                labels.insert(e(i, k + t), (rank0 * k + i) as Label);
            }
            sminus.insert(i, e(i, k + i));
            splus.insert(i, e(i, k + tau));
        }
        BipartiteResidual::new((0..k).collect(), (k..2 * k).collect(), labels, sminus, splus)
            .unwrap()
    }

    #[test]
    fn split_batches_follow_the_averaging_argument() {
        let r = uniform_degree_residual();
        let alive: BTreeSet<VertexId> = r.emitters().iter().copied().collect();
        let split = split_alive(&r, &alive, (1, 8), 8).unwrap();
        assert_eq!(split.eliminated.len(), 8);
        assert_eq!(split.survivors.len(), 8);
        // With all collectors at degree 8 the first batch moves 7 emitters
        // and the second batch supplies the one still missing.
        let mut per_collector: BTreeMap<VertexId, usize> = BTreeMap::new();
        for d in &split.eliminated {
            *per_collector.entry(d.journey.hops[0].1).or_default() += 1;
        }
        let mut batch_sizes: Vec<usize> = per_collector.values().copied().collect();
        batch_sizes.sort_unstable();
        assert_eq!(batch_sizes, vec![1, 7]);
    }

    #[test]
    fn split_on_a_random_legal_residual() {
        let r = random_residual(16, 1);
        let alive: BTreeSet<VertexId> = r.emitters().iter().copied().collect();
        let split = split_alive(&r, &alive, (1, 8), 8).unwrap();
        assert_eq!(split.eliminated.len(), 8);
        assert_eq!(split.survivors.len(), 8);
        for d in &split.eliminated {
            assert!(d.journey.is_valid(&r, Mode::Strict));
            assert_eq!(d.journey.len(), 2);
            let arrival = e(d.journey.hops[1].0, d.delegate);
            let i = r.rank_at(d.delegate, arrival);
            assert!((1..=8).contains(&i));
            assert!(split.survivors.contains(&d.delegate));
        }
    }

    #[test]
    fn stalled_split_is_reported() {
        // k=2 has one-rank intervals at most; force a call with an interval
        // where each collector sees one emitter.
        let r = random_residual(2, 7);
        let alive: BTreeSet<VertexId> = r.emitters().iter().copied().collect();
        // Rank interval (1,1): each emitter contributes its minimum edge,
        // and those form a matching, so every collector has degree 1.
        let got = split_alive(&r, &alive, (1, 1), 1);
        assert!(matches!(got, Err(LayeredError::SplitStalled { remaining: 1 })));
    }

    #[test]
    fn small_residuals_keep_every_edge() {
        let r = random_residual(4, 3);
        let sel = layered_delegation(&r).unwrap();
        assert_eq!(sel.len(), 16);
        let r8 = random_residual(8, 9);
        let sel8 = layered_delegation(&r8).unwrap();
        assert_eq!(sel8.len(), 64);
    }

    #[test]
    fn sixteen_emitters_one_round() {
        let r = random_residual(16, 1);
        let sel = layered_selection(&r).unwrap();
        assert_eq!(sel.steps.len(), 1);
        assert_eq!(sel.steps[0].interval, (1, 8));
        assert_eq!(sel.steps[0].delegations.len(), 8);
        assert_eq!(sel.finalists.len(), 8);
        let edges = sel.all_edges();
        assert!(edges.len() <= 8 * 16 + 8 * 16 + 2 * 16);
        assert!(reaches_all_collectors(&r, &edges));
    }

    #[test]
    fn residual_validation_rejects_bad_inputs() {
        let r = random_residual(3, 5);
        let labels: BTreeMap<EdgeId, Label> = r.edges().collect();
        // Swap the two matchings: ranks are wrong on both sides.
        let got = BipartiteResidual::new(
            r.emitters().to_vec(),
            r.collectors().to_vec(),
            labels.clone(),
            r.matching_plus().clone(),
            r.matching_minus().clone(),
        );
        assert!(matches!(got, Err(LayeredError::InvalidResidual { .. })));

        let mut dup = labels;
        let (&first, _) = dup.iter().next().unwrap();
        let (&second, _) = dup.iter().nth(1).unwrap();
        let l = dup[&first];
        dup.insert(second, l);
        let got = BipartiteResidual::new(
            r.emitters().to_vec(),
            r.collectors().to_vec(),
            dup,
            r.matching_minus().clone(),
            r.matching_plus().clone(),
        );
        assert!(matches!(got, Err(LayeredError::InvalidResidual { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn delegation_spans_the_residual(k in 2usize..40, seed in any::<u64>()) {
            let r = random_residual(k, seed);
            let sel = layered_selection(&r).unwrap();
            let edges = sel.all_edges();
            prop_assert!(reaches_all_collectors(&r, &edges));
            prop_assert!(sel.finalists.len() <= 8.max(k));
            if k > 8 {
                prop_assert_eq!(sel.finalists.len(), 8);
            }
            for (step, rec) in sel.steps.iter().enumerate() {
                let j = step + 1;
                for d in &rec.delegations {
                    prop_assert!(d.journey.is_valid(&r, Mode::Strict));
                    let per_emitter = 2 + rec
                        .direct_edges
                        .iter()
                        .filter(|de| de.u() == d.emitter || de.v() == d.emitter)
                        .count();
                    prop_assert!(per_emitter <= 1 << (j + 3));
                }
            }
            if k.is_power_of_two() && k >= 16 {
                let log = k.ilog2() as usize;
                prop_assert!(edges.len() <= 8 * k * log + 10 * k);
            }
        }

        #[test]
        fn journeys_share_their_batch_collector(k in 9usize..33, seed in any::<u64>()) {
            let r = random_residual(k, seed);
            let sel = layered_selection(&r).unwrap();
            for rec in &sel.steps {
                for d in &rec.delegations {
                    let (u, c, l1) = d.journey.hops[0];
                    let (c2, v, l2) = d.journey.hops[1];
                    prop_assert_eq!(c, c2);
                    prop_assert_eq!(u, d.emitter);
                    prop_assert_eq!(v, d.delegate);
                    prop_assert!(l1 < l2);
                    prop_assert!(rec.journey_edges.contains(&e(u, c)));
                    prop_assert!(rec.journey_edges.contains(&e(c, v)));
                }
            }
        }
    }
}
