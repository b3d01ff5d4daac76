//! Myopic greedy benchmark and the perfect-information assignment OFF.

use alloc::vec::Vec;

use crate::assignment::min_cost_assignment;
use crate::model::{Instance, Minutes, NodeId, StationId};

/// Picks `argmin travel(current, v) + (1 - p_v) * penalty` among
/// `candidates`; ties go to the lower station id.
pub fn greedy_decide(
    instance: &Instance,
    agent: usize,
    current: NodeId,
    candidates: &[StationId],
    p: impl Fn(StationId) -> f64,
) -> Option<StationId> {
    let penalty = instance.agents[agent].penalty;
    let mut best: Option<(Minutes, StationId)> = None;
    for &v in candidates {
        let score = instance.graph.travel(current, v.node()) + (1.0 - p(v)) * penalty;
        let better = match best {
            None => true,
            Some((b, s)) => score < b || (score == b && v < s),
        };
        if better {
            best = Some((score, v));
        }
    }
    best.map(|(_, v)| v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OfflineResult {
    /// Station matched to each agent, `None` for a dummy (failure).
    pub assigned: Vec<Option<StationId>>,
    /// Travel time to the matched station, or the agent's penalty.
    pub per_agent: Vec<Minutes>,
    pub total: Minutes,
}

/// Minimum-cost matching of `agents` to the stations marked available in
/// `available`, with travel time from each agent's start as edge weight.
/// Stations outside an agent's radius or budget get no edge. Every agent may
/// instead take a dummy station at the cost of its penalty.
pub fn offline_assignment(instance: &Instance, agents: &[usize], available: &[bool]) -> OfflineResult {
    let stations: Vec<StationId> = instance
        .graph
        .station_ids()
        .filter(|s| available.get(s.0).copied().unwrap_or(false))
        .collect();
    let rows = agents.len();
    let cols = stations.len() + rows;
    // big enough to never beat a dummy, small enough to keep sums exact-ish
    let forbidden = 1e12;
    let mut cost = alloc::vec![0.0; rows * cols];
    for (r, &i) in agents.iter().enumerate() {
        let spec = &instance.agents[i];
        for (c, &s) in stations.iter().enumerate() {
            let t = instance.graph.travel(spec.start, s.node());
            let ok = instance.within_radius(i, s) && spec.fits_budget(t);
            cost[r * cols + c] = if ok { t } else { forbidden };
        }
        for c in stations.len()..cols {
            cost[r * cols + c] = spec.penalty;
        }
    }
    let (cols_of, _) = min_cost_assignment(&cost, rows, cols);
    let mut assigned = Vec::with_capacity(rows);
    let mut per_agent = Vec::with_capacity(rows);
    for (r, &c) in cols_of.iter().enumerate() {
        if c < stations.len() {
            assigned.push(Some(stations[c]));
        } else {
            assigned.push(None);
        }
        per_agent.push(cost[r * cols + c]);
    }
    let total = per_agent.iter().sum();
    OfflineResult {
        assigned,
        per_agent,
        total,
    }
}
