use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::benchmarks::greedy_decide;
use crate::label::{lh_search, LabelOptions, SearchOrigin};
use crate::model::{
    action_probability, reachable_actions, AgentStatus, Instance, Minutes, NodeId, SearchPolicy, StationId, SystemState,
};
use crate::probability::AvailabilityContext;

use super::static_settings::{select_joint_best, PlanOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RolloutConfig {
    /// Number of simulated events (decisions and arrivals) before the base
    /// policy is cut off.
    pub horizon: usize,
}

impl Default for RolloutConfig {
    fn default() -> Self {
        Self { horizon: 5 }
    }
}

/// Availability of every station for an agent arriving at `now`.
pub fn station_probabilities(state: &SystemState, instance: &Instance, now: Minutes) -> Vec<f64> {
    instance
        .graph
        .station_ids()
        .map(|s| action_probability(state, instance, s, now))
        .collect()
}

/// Actions of the centralized planner: reachable stations that are not the
/// current target of another en-route agent.
pub fn central_actions(state: &SystemState, instance: &Instance, agent: usize) -> Vec<StationId> {
    let targets: BTreeSet<NodeId> = state
        .active
        .iter()
        .filter(|&&j| j != agent)
        .filter_map(|&j| state.agent(j))
        .filter(|a| a.status == AgentStatus::EnRoute)
        .map(|a| a.node)
        .collect();
    reachable_actions(state, agent, instance)
        .into_iter()
        .filter(|s| !targets.contains(&s.node()))
        .collect()
}

fn arrival_p(state: &SystemState, instance: &Instance, agent: usize, v: StationId) -> f64 {
    let at = state.agent(agent).expect("departed agent");
    action_probability(
        state,
        instance,
        v,
        at.arrival + instance.graph.travel(at.node, v.node()),
    )
}

fn greedy_choice(state: &SystemState, instance: &Instance, agent: usize) -> Option<StationId> {
    let at = state.agent(agent).expect("departed agent");
    let actions = central_actions(state, instance, agent);
    greedy_decide(instance, agent, at.node, &actions, |v| {
        arrival_p(state, instance, agent, v)
    })
}

/// Moves `agent` to `action` or lets it give up. The global penalty is left
/// to the caller.
fn step_decide(
    state: &SystemState,
    instance: &Instance,
    agent: usize,
    action: Option<StationId>,
) -> (SystemState, Minutes) {
    let mut next = state.clone();
    let slot = next.agents[agent].as_mut().expect("departed agent");
    let cost = match action {
        Some(v) => {
            let t = instance.graph.travel(slot.node, v.node());
            slot.node = v.node();
            slot.arrival += t;
            slot.status = AgentStatus::EnRoute;
            t
        }
        None => {
            slot.status = AgentStatus::Failed;
            next.active.remove(&agent);
            next.terminated.insert(agent);
            instance.agents[agent].penalty
        }
    };
    (next, cost)
}

fn step_arrive(state: &SystemState, instance: &Instance, agent: usize, found: bool) -> (SystemState, Minutes) {
    let mut next = state.clone();
    let slot = next.agents[agent].as_mut().expect("departed agent");
    let station = StationId(slot.node.0);
    next.clock = slot.arrival;
    let mut cost = 0.0;
    if found {
        slot.status = AgentStatus::Found;
        cost = instance.agents[agent].gamma(station);
        next.active.remove(&agent);
        next.terminated.insert(agent);
    } else {
        slot.status = AgentStatus::Deciding;
    }
    next.observed.insert(station, next.clock);
    (next, cost)
}

/// Earliest pending epoch: a decision or arrival of an active agent, or the
/// request of an agent that has not departed yet.
fn next_epoch(state: &SystemState, instance: &Instance) -> Option<usize> {
    state
        .agents
        .iter()
        .enumerate()
        .filter_map(|(i, a)| match a {
            None => Some((instance.agents[i].t0, i)),
            Some(a) if !a.status.is_terminal() => Some((a.arrival, i)),
            Some(_) => None,
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, i)| i)
}

fn truncation_charge(state: &SystemState, instance: &Instance) -> Minutes {
    let mut cost = 0.0;
    for &i in &state.active {
        let a = state.agent(i).expect("active agents departed");
        let penalty = instance.agents[i].penalty;
        cost += match a.status {
            AgentStatus::EnRoute => {
                let p = action_probability(state, instance, StationId(a.node.0), a.arrival);
                (1.0 - p) * penalty
            }
            _ => penalty,
        };
    }
    if state.any_failed() {
        cost += instance.beta_global;
    }
    cost
}

fn base_tail(state: &SystemState, instance: &Instance, k: usize) -> Minutes {
    let Some(i) = next_epoch(state, instance) else {
        return if state.any_failed() { instance.beta_global } else { 0.0 };
    };
    if k == 0 {
        return truncation_charge(state, instance);
    }
    let Some(a) = state.agent(i) else {
        let departed = state.depart(instance, i).expect("pending agent departs");
        return base_tail(&departed, instance, k);
    };
    match a.status {
        AgentStatus::EnRoute => {
            let station = StationId(a.node.0);
            let p = action_probability(state, instance, station, a.arrival);
            let mut value = 0.0;
            if p > 0.0 {
                let (s, c) = step_arrive(state, instance, i, true);
                value += p * (c + base_tail(&s, instance, k - 1));
            }
            if p < 1.0 {
                let (f, c) = step_arrive(state, instance, i, false);
                value += (1.0 - p) * (c + base_tail(&f, instance, k - 1));
            }
            value
        }
        _ => {
            let action = greedy_choice(state, instance, i);
            let (next, c) = step_decide(state, instance, i, action);
            c + base_tail(&next, instance, k - 1)
        }
    }
}

/// Expected cost of running the greedy base policy from `state` for `k`
/// events (requests of agents that have not departed yet included), with a myopic charge for whatever is
/// unresolved at the cut: the penalty for a deciding agent, the failure
/// probability times the penalty for an en-route one, and the global
/// penalty once some agent has failed.
pub fn greedy_base_cost(state: &SystemState, instance: &Instance, k: usize) -> Minutes {
    base_tail(state, instance, k)
}

/// Q-value of every central action of `agent`, in station order.
pub fn rollout_q_values(
    state: &SystemState,
    instance: &Instance,
    agent: usize,
    cfg: &RolloutConfig,
) -> Vec<(StationId, Minutes)> {
    central_actions(state, instance, agent)
        .into_iter()
        .map(|v| {
            let p = arrival_p(state, instance, agent, v);
            let (moved, travel) = step_decide(state, instance, agent, Some(v));
            let mut q = travel;
            if p > 0.0 {
                let (s, gamma) = step_arrive(&moved, instance, agent, true);
                q += p * (gamma + base_tail(&s, instance, cfg.horizon));
            }
            if p < 1.0 {
                let (f, _) = step_arrive(&moved, instance, agent, false);
                q += (1.0 - p) * base_tail(&f, instance, cfg.horizon);
            }
            (v, q)
        })
        .collect()
}

/// One-step lookahead over the central actions with the greedy base policy
/// as cost-to-go. Ties go to the lower station id; `None` when no action is
/// left.
pub fn rollout_decide(
    state: &SystemState,
    instance: &Instance,
    agent: usize,
    cfg: &RolloutConfig,
) -> Option<StationId> {
    let mut best: Option<(Minutes, StationId)> = None;
    for (v, q) in rollout_q_values(state, instance, agent, cfg) {
        if best.is_none_or(|(b, _)| q < b) {
            best = Some((q, v));
        }
    }
    best.map(|(_, v)| v)
}

/// Re-plans `agent` with LH from its current station and keeps the candidate
/// that minimizes the joint cost together with the other agents' policies in
/// `pi`. The chosen policy replaces the agent's entry in `pi`; its first
/// station is returned.
pub fn lhro_decide(
    state: &SystemState,
    instance: &Instance,
    agent: usize,
    pi: &mut BTreeMap<usize, SearchPolicy>,
    opts: &PlanOptions,
) -> Option<StationId> {
    pi.remove(&agent);
    pi.retain(|j, _| !state.terminated.contains(j));
    let at = *state.agent(agent)?;
    let allowed: BTreeSet<StationId> = central_actions(state, instance, agent).into_iter().collect();
    if allowed.is_empty() {
        return None;
    }
    let targets: BTreeSet<StationId> = state
        .active
        .iter()
        .filter(|&&j| j != agent)
        .filter_map(|&j| state.agent(j))
        .filter(|a| a.status == AgentStatus::EnRoute)
        .map(|a| StationId(a.node.0))
        .collect();
    let excluded = instance
        .graph
        .station_ids()
        .filter(|s| targets.contains(s) || (state.is_observed(*s) && !readmitted(state, instance, *s, at.arrival)));
    let origin = SearchOrigin {
        node: at.node,
        clock: at.arrival,
        excluded: excluded.collect(),
    };
    let base_p = station_probabilities(state, instance, at.arrival);
    let others: Vec<SearchPolicy> = pi.values().cloned().collect();
    let ctx = AvailabilityContext::from_policies(base_p.clone(), &others, opts.rule);
    let candidates = lh_search(instance, agent, &ctx, &origin, &opts.label);
    let chosen = if others.is_empty() {
        candidates.into_iter().next()?
    } else {
        select_joint_best(instance, &others, candidates, &base_p, opts, agent)
    };
    let first = chosen.first_station()?;
    pi.insert(agent, chosen);
    Some(first)
}

fn readmitted(state: &SystemState, instance: &Instance, s: StationId, now: Minutes) -> bool {
    match state.observed.get(&s) {
        Some(&seen) => instance.recovery.enabled && now - seen > instance.recovery.t_thres,
        None => true,
    }
}

/// Decentralized re-planning: LH on base probabilities from the agent's
/// current node, without the shared observations; first station of the best
/// policy.
pub fn dec_o_d_decide(
    instance: &Instance,
    agent: usize,
    node: NodeId,
    clock: Minutes,
    observations: &BTreeSet<StationId>,
    label: &LabelOptions,
) -> Option<StationId> {
    let origin = SearchOrigin {
        node,
        clock,
        excluded: observations.clone(),
    };
    let ctx = AvailabilityContext::independent(instance.graph.base_probabilities());
    let opts = LabelOptions { n_best: 1, ..*label };
    lh_search(instance, agent, &ctx, &origin, &opts)
        .into_iter()
        .next()?
        .first_station()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::model::{apply_transition, AgentState};
    use crate::planners::{plan_request, SharedBoard, StaticSetting};
    use alloc::vec;

    fn deciding_at_start(inst: &Instance) -> SystemState {
        SystemState::initial(inst).depart(inst, 0).unwrap()
    }

    #[test]
    fn base_cost_terminal_and_single_branch() {
        let g = matrix_graph(vec![station(0, 0.5)], 1, |_, _| 2.0);
        let inst = single_agent(g, 5.0, 10.0, 700.0);
        let st = deciding_at_start(&inst);
        // decide, arrive, forced failure: three events
        let v = greedy_base_cost(&st, &inst, 3);
        assert!((v - (2.0 + 0.5 * 10.0 + 0.5 * 700.0)).abs() < 1e-12);
        assert_eq!(greedy_base_cost(&st, &inst, 0), 10.0);

        let (st, _) = apply_transition(&st, &inst, 0, Some(StationId(0)), None).unwrap();
        let (done, _) = apply_transition(&st, &inst, 0, None, Some(false)).unwrap();
        assert!(done.is_terminal());
        assert_eq!(greedy_base_cost(&done, &inst, 5), 700.0);
    }

    #[test]
    fn rollout_trivial_cases() {
        let g = matrix_graph(vec![station(0, 0.5)], 1, |_, _| 2.0);
        let inst = single_agent(g, 5.0, 10.0, 700.0);
        let st = deciding_at_start(&inst);
        assert_eq!(
            rollout_decide(&st, &inst, 0, &RolloutConfig::default()),
            Some(StationId(0))
        );
        let mut stuck = st.clone();
        stuck.agents[0] = Some(AgentState {
            node: NodeId(0),
            arrival: 2.0,
            status: AgentStatus::Deciding,
        });
        stuck.observed.insert(StationId(0), 2.0);
        assert_eq!(rollout_decide(&stuck, &inst, 0, &RolloutConfig::default()), None);
    }

    #[test]
    fn lookahead_beats_myopic_choice() {
        // A is near but isolated; B and C are a bit farther and close to each other.
        let g = matrix_graph(
            vec![station(0, 0.5), station(1, 0.45), station(2, 0.45)],
            1,
            |a, b| match (a, b) {
                (0, 3) => 1.0,
                (1, 3) | (2, 3) => 1.2,
                (1, 2) => 0.2,
                _ => 4.5,
            },
        );
        let inst = single_agent(g, 5.0, 60.0, 0.0);
        let st = deciding_at_start(&inst);
        let actions = central_actions(&st, &inst, 0);
        let myopic = greedy_decide(&inst, 0, inst.agents[0].start, &actions, |s| inst.graph.station(s).p);
        assert_eq!(myopic, Some(StationId(0)));
        let ro = rollout_decide(&st, &inst, 0, &RolloutConfig { horizon: 5 });
        assert_eq!(ro, Some(StationId(1)));
    }

    #[test]
    fn zero_horizon_matches_greedy() {
        let inst = single_agent(two_station(0.5, 0.8), 5.0, 10.0, 700.0);
        let st = deciding_at_start(&inst);
        let actions = central_actions(&st, &inst, 0);
        let g = greedy_decide(&inst, 0, inst.agents[0].start, &actions, |s| inst.graph.station(s).p);
        assert_eq!(rollout_decide(&st, &inst, 0, &RolloutConfig { horizon: 0 }), g);
    }

    #[test]
    fn lhro_single_agent_is_dec_o_d() {
        let inst = single_agent(two_station(0.5, 0.5), 5.0, 10.0, 700.0);
        let st = deciding_at_start(&inst);
        let mut pi = BTreeMap::new();
        let opts = PlanOptions::default();
        let a = lhro_decide(&st, &inst, 0, &mut pi, &opts);
        let b = dec_o_d_decide(&inst, 0, inst.agents[0].start, 0.0, &BTreeSet::new(), &opts.label);
        assert_eq!(a, b);
        assert_eq!(pi.len(), 1);

        let mut late = st.clone();
        late.agents[0] = Some(AgentState {
            node: NodeId(0),
            arrival: 5.0,
            status: AgentStatus::Deciding,
        });
        late.observed.insert(StationId(0), 5.0);
        assert_eq!(lhro_decide(&late, &inst, 0, &mut pi, &opts), None);
        assert!(pi.is_empty());
    }

    #[test]
    fn dec_o_d_follows_static_plan_and_skips_new_observations() {
        let inst = single_agent(two_station(0.5, 0.5), 5.0, 10.0, 700.0);
        let opts = PlanOptions::default();
        let plan = plan_request(&inst, 0, &SharedBoard::default(), StaticSetting::DecO, &opts);
        let start = inst.agents[0].start;
        let first = dec_o_d_decide(&inst, 0, start, 0.0, &BTreeSet::new(), &opts.label);
        assert_eq!(first, plan.first_station());
        let seen: BTreeSet<StationId> = [plan.first_station().unwrap()].into_iter().collect();
        let next = dec_o_d_decide(&inst, 0, start, 0.0, &seen, &opts.label);
        assert_ne!(next, plan.first_station());
    }
}
