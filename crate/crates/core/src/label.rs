//! Multi-label setting heuristic (LH) for single-agent search policies.

use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use crate::error::{Error, Result};
use crate::model::{CostTriple, Instance, Minutes, NodeId, SearchPolicy, StationId, Visit};
use crate::probability::AvailabilityContext;

/// Partial policy ending at `node`.
#[derive(Debug, Clone, PartialEq)]
pub struct Label {
    pub node: NodeId,
    /// Clock at `node`.
    pub t: Minutes,
    pub a: Minutes,
    pub rho: f64,
    pub alpha: Minutes,
    /// Arena index of the predecessor label.
    pub parent: Option<usize>,
    pub depth: usize,
    visited: Vec<u64>,
}

impl Label {
    /// Root label: no visit yet, certain failure.
    pub fn root(node: NodeId, t: Minutes, penalty: Minutes) -> Self {
        Self {
            node,
            t,
            a: 0.0,
            rho: 0.0,
            alpha: penalty,
            parent: None,
            depth: 0,
            visited: Vec::new(),
        }
    }

    pub fn has_visited(&self, s: StationId) -> bool {
        self.visited
            .get(s.0 / 64)
            .is_some_and(|w| w & (1u64 << (s.0 % 64)) != 0)
    }

    pub fn cost(&self) -> CostTriple {
        CostTriple {
            a: self.a,
            rho: self.rho,
            alpha: self.alpha,
        }
    }
}

/// Which labels count as complete candidate policies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TerminalRule {
    /// Every non-empty partial policy.
    #[default]
    AnyPrefix,
    /// Only labels without a feasible extension.
    DeadEnd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelOptions {
    pub n_best: usize,
    pub dominance: bool,
    pub terminal: TerminalRule,
    /// Hard cap on created labels.
    pub max_labels: usize,
}

impl Default for LabelOptions {
    fn default() -> Self {
        Self {
            n_best: 10,
            dominance: true,
            terminal: TerminalRule::AnyPrefix,
            max_labels: 200_000,
        }
    }
}

impl LabelOptions {
    pub fn best_only() -> Self {
        Self {
            n_best: 1,
            ..Self::default()
        }
    }
}

/// Where a search starts: the agent's start location at departure, or its
/// current station mid-search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOrigin {
    pub node: NodeId,
    pub clock: Minutes,
    /// Stations removed from the graph (observed, claimed, ...).
    pub excluded: BTreeSet<StationId>,
}

impl SearchOrigin {
    pub fn start(instance: &Instance, agent: usize) -> Self {
        let spec = &instance.agents[agent];
        Self {
            node: spec.start,
            clock: spec.t0,
            excluded: BTreeSet::new(),
        }
    }

    pub fn excluding(mut self, excluded: impl IntoIterator<Item = StationId>) -> Self {
        self.excluded.extend(excluded);
        self
    }
}

/// Extends `label` to station `to`. `None` if `to` repeats a station or is
/// out of radius or budget.
pub fn propagate(
    label: &Label,
    to: StationId,
    instance: &Instance,
    agent: usize,
    ctx: &AvailabilityContext,
) -> Option<Label> {
    let spec = &instance.agents[agent];
    if label.has_visited(to) || to.node() == label.node || !instance.within_radius(agent, to) {
        return None;
    }
    let travel = instance.graph.travel(label.node, to.node());
    let t = label.t + travel;
    if !spec.fits_budget(t - spec.t0) {
        return None;
    }
    let p = ctx.availability(to, t);
    let fail = 1.0 - label.rho;
    let a = label.a + travel * fail + spec.gamma(to) * p * fail;
    let fail = fail * (1.0 - p);
    let mut visited = label.visited.clone();
    if visited.len() <= to.0 / 64 {
        visited.resize(to.0 / 64 + 1, 0);
    }
    visited[to.0 / 64] |= 1u64 << (to.0 % 64);
    Some(Label {
        node: to.node(),
        t,
        a,
        rho: 1.0 - fail,
        alpha: a + fail * spec.penalty,
        parent: None,
        depth: label.depth + 1,
        visited,
    })
}

/// `l1` dominates `l2` when it fails no more often and costs no more.
pub fn dominates(l1: &Label, l2: &Label) -> Result<bool> {
    if l1.node != l2.node {
        return Err(Error::DifferentNodes);
    }
    Ok(1.0 - l1.rho <= 1.0 - l2.rho && l1.a <= l2.a)
}

/// Sorts by alpha, then sequence length, then station ids. Stable.
pub fn candidate_cost_ordering(mut policies: Vec<SearchPolicy>) -> Vec<SearchPolicy> {
    policies.sort_by(compare_candidates);
    policies
}

fn compare_candidates(x: &SearchPolicy, y: &SearchPolicy) -> Ordering {
    x.cost
        .alpha
        .total_cmp(&y.cost.alpha)
        .then(x.visits.len().cmp(&y.visits.len()))
        .then_with(|| x.stations().cmp(y.stations()))
}

#[derive(Debug, PartialEq)]
struct Key(Minutes, usize);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Result of a label search with its bookkeeping, for inspection in tests.
#[derive(Debug, Clone)]
pub struct SearchTrace {
    pub labels: Vec<Label>,
    /// Labels not pruned by dominance.
    pub alive: Vec<bool>,
    /// Arena indices in pop order.
    pub popped: Vec<usize>,
    /// Alpha of the smallest live active label at each pop.
    pub pool_min: Vec<Minutes>,
    pub candidates: Vec<SearchPolicy>,
    pub truncated: bool,
}

/// Runs LH for `agent` from `origin` and returns up to `n_best` candidate
/// policies, best first. Without any reachable station the single result is
/// the empty policy (rho 0, alpha equal to the agent's penalty).
pub fn lh_search(
    instance: &Instance,
    agent: usize,
    ctx: &AvailabilityContext,
    origin: &SearchOrigin,
    opts: &LabelOptions,
) -> Vec<SearchPolicy> {
    run(instance, agent, ctx, origin, opts, false).candidates
}

/// [`lh_search`] that also records the label arena and the pool minimum at
/// every pop.
pub fn lh_trace(
    instance: &Instance,
    agent: usize,
    ctx: &AvailabilityContext,
    origin: &SearchOrigin,
    opts: &LabelOptions,
) -> SearchTrace {
    run(instance, agent, ctx, origin, opts, true)
}

fn run(
    instance: &Instance,
    agent: usize,
    ctx: &AvailabilityContext,
    origin: &SearchOrigin,
    opts: &LabelOptions,
    record: bool,
) -> SearchTrace {
    let spec = &instance.agents[agent];
    let mut labels = alloc::vec![Label::root(origin.node, origin.clock, spec.penalty)];
    let mut alive = alloc::vec![true];
    let mut settled = alloc::vec![false];
    let mut at_node: Vec<Vec<usize>> = alloc::vec![Vec::new(); instance.graph.num_nodes()];
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(Key(labels[0].alpha, 0)));
    let mut popped = Vec::new();
    let mut pool_min = Vec::new();
    let mut terminal = Vec::new();
    let mut truncated = false;

    while let Some(Reverse(Key(_, idx))) = heap.pop() {
        if !alive[idx] {
            continue;
        }
        if record {
            let min = (0..labels.len())
                .filter(|&i| alive[i] && !settled[i])
                .map(|i| labels[i].alpha)
                .fold(f64::INFINITY, f64::min);
            pool_min.push(min);
            popped.push(idx);
        }
        settled[idx] = true;
        let mut extended = false;
        for s in instance.graph.station_ids() {
            if origin.excluded.contains(&s) {
                continue;
            }
            let Some(mut child) = propagate(&labels[idx], s, instance, agent, ctx) else {
                continue;
            };
            extended = true;
            if labels.len() >= opts.max_labels {
                truncated = true;
                continue;
            }
            child.parent = Some(idx);
            let node = child.node.0;
            if opts.dominance {
                let beaten = at_node[node]
                    .iter()
                    .any(|&j| dominates(&labels[j], &child).unwrap_or(false));
                if beaten {
                    continue;
                }
                at_node[node].retain(|&j| {
                    let keep = !dominates(&child, &labels[j]).unwrap_or(false);
                    if !keep {
                        alive[j] = false;
                    }
                    keep
                });
            }
            let id = labels.len();
            heap.push(Reverse(Key(child.alpha, id)));
            labels.push(child);
            alive.push(true);
            settled.push(false);
            at_node[node].push(id);
            if opts.terminal == TerminalRule::AnyPrefix {
                terminal.push(id);
            }
        }
        if !extended && opts.terminal == TerminalRule::DeadEnd && idx != 0 {
            terminal.push(idx);
        }
    }

    let mut candidates: Vec<SearchPolicy> = terminal.iter().map(|&i| to_policy(&labels, i, agent, origin)).collect();
    candidates = candidate_cost_ordering(candidates);
    candidates.truncate(opts.n_best.max(1));
    if candidates.is_empty() {
        candidates.push(to_policy(&labels, 0, agent, origin));
    }
    if !record {
        labels.clear();
        alive.clear();
    }
    SearchTrace {
        labels,
        alive,
        popped,
        pool_min,
        candidates,
        truncated,
    }
}

fn to_policy(labels: &[Label], idx: usize, agent: usize, origin: &SearchOrigin) -> SearchPolicy {
    let mut visits = Vec::with_capacity(labels[idx].depth);
    let mut cur = Some(idx);
    while let Some(i) = cur {
        let l = &labels[i];
        if l.parent.is_some() {
            visits.push(Visit {
                station: StationId(l.node.0),
                arrival: l.t,
            });
        }
        cur = l.parent;
    }
    visits.reverse();
    SearchPolicy {
        agent,
        origin: origin.node,
        depart: origin.clock,
        visits,
        cost: labels[idx].cost(),
    }
}
