//! Exhaustive evaluations for tiny instances. Slow on purpose; these are the
//! reference values the heuristics and the closed-form costs are checked
//! against.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::label::candidate_cost_ordering;
use crate::model::{
    apply_transition, reachable_actions, CostTriple, Event, Instance, Minutes, NodeId, SearchPolicy, StationGraph,
    StationId, SystemState,
};
use crate::probability::{policy_cost, AvailabilityContext};
use crate::simulation::{simulate_run, RealizationMatrix, Setting, SimConfig};

pub const MAX_ENUMERATED_STATIONS: usize = 16;
pub const MAX_SINGLE_STATIONS: usize = 8;
pub const MAX_MDP_STATIONS: usize = 5;
pub const MAX_MDP_AGENTS: usize = 3;

/// Every availability vector with positive probability, with its
/// probability.
pub fn enumerate_realizations(p: &[f64]) -> Result<Vec<(Vec<bool>, f64)>> {
    if p.len() > MAX_ENUMERATED_STATIONS {
        return Err(Error::TooLarge("too many stations to enumerate"));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << p.len()) {
        let bits: Vec<bool> = (0..p.len()).map(|s| mask & (1 << s) != 0).collect();
        let w = bits
            .iter()
            .zip(p)
            .fold(1.0, |acc, (&b, &q)| acc * if b { q } else { 1.0 - q });
        if w > 0.0 {
            out.push((bits, w));
        }
    }
    Ok(out)
}

/// Outcome of one policy-set replay.
#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    pub cost: Minutes,
    pub success: Vec<bool>,
    /// Some agent arrived at a station another agent had already visited.
    pub conflict: bool,
}

/// Executes fixed policies on one realization. Visits are processed by
/// (arrival, policy index); the first visitor of an available station takes
/// it and everybody after finds it occupied.
pub fn replay_policies(policies: &[SearchPolicy], instance: &Instance, available: &[bool]) -> Replay {
    let mut order: Vec<(Minutes, usize, usize)> = policies
        .iter()
        .enumerate()
        .flat_map(|(j, p)| p.visits.iter().enumerate().map(move |(k, v)| (v.arrival, j, k)))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut visited_by: BTreeMap<StationId, usize> = BTreeMap::new();
    let mut done = alloc::vec![false; policies.len()];
    let mut success = alloc::vec![false; policies.len()];
    let mut at: Vec<_> = policies.iter().map(|p| p.origin).collect();
    let mut cost = 0.0;
    let mut conflict = false;
    for (_, j, k) in order {
        if done[j] {
            continue;
        }
        let spec = &instance.agents[policies[j].agent];
        let s = policies[j].visits[k].station;
        cost += instance.graph.travel(at[j], s.node());
        at[j] = s.node();
        let taken = match visited_by.get(&s) {
            Some(&other) => {
                conflict |= other != j;
                true
            }
            None => false,
        };
        visited_by.entry(s).or_insert(j);
        if available[s.0] && !taken {
            done[j] = true;
            success[j] = true;
            cost += spec.gamma(s);
        }
    }
    for (j, p) in policies.iter().enumerate() {
        if !success[j] {
            cost += instance.agents[p.agent].penalty;
        }
    }
    if success.iter().any(|s| !s) {
        cost += instance.beta_global;
    }
    Replay {
        cost,
        success,
        conflict,
    }
}

/// Expected cost of executing `policies` over all realizations.
pub fn exact_policy_set_value(policies: &[SearchPolicy], instance: &Instance) -> Result<Minutes> {
    let real = enumerate_realizations(&instance.graph.base_probabilities())?;
    Ok(real
        .iter()
        .map(|(bits, w)| w * replay_policies(policies, instance, bits).cost)
        .sum())
}

/// True when in no positive-probability realization an agent reaches a
/// station that another agent has already visited: the policies never need
/// each other's observations.
pub fn is_user_independent(policies: &[SearchPolicy], instance: &Instance) -> Result<bool> {
    let real = enumerate_realizations(&instance.graph.base_probabilities())?;
    Ok(real
        .iter()
        .all(|(bits, _)| !replay_policies(policies, instance, bits).conflict))
}

/// Expected cost of one agent following `stations` by enumeration, without
/// the global penalty.
pub fn exact_sequence_triple(instance: &Instance, policy: &SearchPolicy) -> Result<CostTriple> {
    let real = enumerate_realizations(&instance.graph.base_probabilities())?;
    let spec = &instance.agents[policy.agent];
    let mut a = 0.0;
    let mut rho = 0.0;
    for (bits, w) in &real {
        let mut at = policy.origin;
        for v in &policy.visits {
            a += w * instance.graph.travel(at, v.station.node());
            at = v.station.node();
            if bits[v.station.0] {
                a += w * spec.gamma(v.station);
                rho += w;
                break;
            }
        }
    }
    Ok(CostTriple {
        a,
        rho,
        alpha: a + (1.0 - rho) * spec.penalty,
    })
}

/// All feasible non-empty visit sequences of `agent` from its start.
pub fn feasible_sequences(instance: &Instance, agent: usize) -> Result<Vec<Vec<StationId>>> {
    if instance.graph.num_stations() > MAX_SINGLE_STATIONS {
        return Err(Error::TooLarge("too many stations for exhaustive sequences"));
    }
    let spec = &instance.agents[agent];
    let mut out = Vec::new();
    let mut path = Vec::new();
    fn go(
        instance: &Instance,
        agent: usize,
        at: crate::model::NodeId,
        elapsed: Minutes,
        path: &mut Vec<StationId>,
        out: &mut Vec<Vec<StationId>>,
    ) {
        for s in instance.graph.station_ids() {
            if path.contains(&s) || !instance.within_radius(agent, s) {
                continue;
            }
            let e = elapsed + instance.graph.travel(at, s.node());
            if !instance.agents[agent].fits_budget(e) {
                continue;
            }
            path.push(s);
            out.push(path.clone());
            go(instance, agent, s.node(), e, path, out);
            path.pop();
        }
    }
    go(instance, agent, spec.start, 0.0, &mut path, &mut out);
    Ok(out)
}

/// Single-agent copy of `instance` for `agent` with usage costs folded into
/// travel times, `t(u, v) + p_v * gamma_v`, and the budget and radius
/// lifted. Costs of a fixed sequence are unchanged by the rewrite.
pub fn gamma_transformed(instance: &Instance, agent: usize) -> Result<Instance> {
    let g = &instance.graph;
    let spec = instance.agents.get(agent).ok_or(Error::UnknownAgent(agent))?;
    let n = g.num_nodes();
    let mut m = alloc::vec![0.0; n * n];
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let extra = match g.as_station(NodeId(v)) {
                Some(s) => g.station(s).p * spec.gamma(s),
                None => 0.0,
            };
            m[u * n + v] = g.travel(NodeId(u), NodeId(v)) + extra;
        }
    }
    let graph = StationGraph::from_matrix(g.stations().to_vec(), g.origins().to_vec(), m)?;
    let mut a = spec.clone();
    a.usage_cost.clear();
    a.budget = f64::MAX;
    a.radius = f64::MAX;
    Instance::new(graph, alloc::vec![a], instance.beta_global)
}

/// Minimum-alpha policy of `agent` over every feasible sequence, base
/// probabilities. The empty policy when nothing is reachable.
pub fn exact_single_optimum(instance: &Instance, agent: usize) -> Result<SearchPolicy> {
    let ctx = AvailabilityContext::independent(instance.graph.base_probabilities());
    let spec = &instance.agents[agent];
    let mut all: Vec<SearchPolicy> = feasible_sequences(instance, agent)?
        .iter()
        .map(|seq| policy_cost(instance, agent, spec.start, spec.t0, seq, &ctx))
        .collect::<Result<_>>()?;
    if all.is_empty() {
        all.push(policy_cost(instance, agent, spec.start, spec.t0, &[], &ctx)?);
    }
    Ok(candidate_cost_ordering(all).swap_remove(0))
}

/// Optimal expected cost of the centralized process from the initial state,
/// by backward induction over every decision and availability outcome.
/// Deciding agents may also give up.
pub fn exact_mdp_value(instance: &Instance) -> Result<Minutes> {
    if instance.graph.num_stations() > MAX_MDP_STATIONS || instance.num_agents() > MAX_MDP_AGENTS {
        return Err(Error::TooLarge("exact MDP limited to 5 stations and 3 agents"));
    }
    if instance.recovery.enabled {
        return Err(Error::InvalidInstance("exact MDP requires persistent occupancy"));
    }
    let mut memo = BTreeMap::new();
    mdp_value(&SystemState::initial(instance), instance, &mut memo)
}

fn state_key(state: &SystemState) -> Vec<u64> {
    let mut key = Vec::with_capacity(state.agents.len() * 3 + 1);
    for a in &state.agents {
        match a {
            None => key.extend([u64::MAX, 0, 0]),
            Some(a) => key.extend([a.status.code() as u64, a.node.0 as u64, a.arrival.to_bits()]),
        }
    }
    key.push(state.observed.keys().fold(0u64, |m, s| m | (1 << s.0)));
    key
}

fn mdp_value(state: &SystemState, instance: &Instance, memo: &mut BTreeMap<Vec<u64>, Minutes>) -> Result<Minutes> {
    if state.is_terminal() {
        return Ok(0.0);
    }
    let key = state_key(state);
    if let Some(&v) = memo.get(&key) {
        return Ok(v);
    }
    let value = match state.next_event(instance, true) {
        Some(Event::Depart { agent, .. }) => {
            let departed = state.depart(instance, agent)?;
            best_action(state, &departed, instance, agent, None, memo)?
        }
        Some(Event::Arrive { agent, station, .. }) => {
            let p = if state.is_observed(station) {
                0.0
            } else {
                instance.graph.station(station).p
            };
            let mut v = 0.0;
            if p > 0.0 {
                let (next, c) = apply_transition(state, instance, agent, None, Some(true))?;
                v += p * (c + mdp_value(&next, instance, memo)?);
            }
            if p < 1.0 {
                let (seen, _) = state.observe(instance, agent, false)?;
                v += (1.0 - p) * best_action(state, &seen, instance, agent, Some(false), memo)?;
            }
            v
        }
        None => return Err(Error::InvalidInstance("non-terminal state without events")),
    };
    memo.insert(key, value);
    Ok(value)
}

fn best_action(
    state: &SystemState,
    deciding: &SystemState,
    instance: &Instance,
    agent: usize,
    obs: Option<bool>,
    memo: &mut BTreeMap<Vec<u64>, Minutes>,
) -> Result<Minutes> {
    let mut actions: Vec<Option<StationId>> = reachable_actions(deciding, agent, instance)
        .into_iter()
        .map(Some)
        .collect();
    actions.push(None);
    let mut best = f64::INFINITY;
    for a in actions {
        let (next, c) = apply_transition(state, instance, agent, a, obs)?;
        best = best.min(c + mdp_value(&next, instance, memo)?);
    }
    Ok(best)
}

/// Expected realized cost (usage costs and global penalty included) of a
/// simulated setting, over every availability realization.
pub fn exact_setting_value(instance: &Instance, setting: Setting, cfg: &SimConfig) -> Result<Minutes> {
    if instance.recovery.enabled {
        return Err(Error::InvalidInstance("exact evaluation requires persistent occupancy"));
    }
    let n = instance.graph.num_stations();
    let real = enumerate_realizations(&instance.graph.base_probabilities())?;
    Ok(real
        .into_iter()
        .map(|(bits, w)| {
            let m = RealizationMatrix::from_bits(n, &[bits]);
            w * simulate_run(setting, instance, &m, 0, cfg).full_cost(instance)
        })
        .sum())
}
