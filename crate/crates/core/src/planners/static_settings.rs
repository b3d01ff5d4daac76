use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::label::{lh_search, LabelOptions, SearchOrigin};
use crate::model::{Instance, Minutes, SearchPolicy, StationId};
use crate::probability::{evaluate_policy_set, triples_cost, AvailabilityContext, ConflictRule, PeerKnowledge};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StaticSetting {
    /// No sharing.
    Dec,
    /// Observations shared.
    DecO,
    /// Intentions shared.
    DecI,
    /// Observations and truncated intentions shared.
    DecIo,
}

impl StaticSetting {
    pub fn uses_observations(self) -> bool {
        matches!(self, StaticSetting::DecO | StaticSetting::DecIo)
    }

    pub fn uses_intentions(self) -> bool {
        matches!(self, StaticSetting::DecI | StaticSetting::DecIo)
    }
}

/// What earlier requests left behind for later ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SharedBoard {
    /// Stations seen occupied (or taken), with the time they were seen.
    pub observations: BTreeMap<StationId, Minutes>,
    /// Policies of earlier agents, in request order.
    pub intentions: Vec<SearchPolicy>,
    /// Agents known to have finished their search.
    pub terminated: BTreeSet<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanOptions {
    pub label: LabelOptions,
    /// Pick the candidate with the lowest joint cost instead of the own best.
    pub collaborative: bool,
    pub rule: ConflictRule,
    pub peers: PeerKnowledge,
}

/// Keeps, per policy, only the visits planned at or after `now`; drops
/// policies of terminated agents and policies left empty.
pub fn truncate_intentions(policies: &[SearchPolicy], now: Minutes, terminated: &BTreeSet<usize>) -> Vec<SearchPolicy> {
    policies
        .iter()
        .filter(|p| !terminated.contains(&p.agent))
        .filter_map(|p| {
            let cut = p.visits.iter().position(|v| v.arrival >= now)?;
            let mut q = p.clone();
            if cut > 0 {
                let last = q.visits[cut - 1];
                q.origin = last.station.node();
                q.depart = last.arrival;
                q.visits.drain(..cut);
            }
            Some(q)
        })
        .collect()
}

/// Search path for `agent` requesting at its departure time under `setting`.
pub fn plan_request(
    instance: &Instance,
    agent: usize,
    board: &SharedBoard,
    setting: StaticSetting,
    opts: &PlanOptions,
) -> SearchPolicy {
    let spec = &instance.agents[agent];
    let now = spec.t0;
    let mut origin = SearchOrigin::start(instance, agent);
    if setting.uses_observations() {
        let recovery = instance.recovery;
        origin = origin.excluding(
            board
                .observations
                .iter()
                .filter(|(_, &t)| t <= now && (!recovery.enabled || now - t <= recovery.t_thres))
                .map(|(&s, _)| s),
        );
    }
    let base_p = instance.graph.base_probabilities();
    let priors: Vec<SearchPolicy> = match setting {
        StaticSetting::DecI => board.intentions.clone(),
        StaticSetting::DecIo => truncate_intentions(&board.intentions, now, &board.terminated),
        _ => Vec::new(),
    };
    let ctx = if setting.uses_intentions() {
        AvailabilityContext::from_policies(base_p.clone(), &priors, opts.rule)
    } else {
        AvailabilityContext::independent(base_p.clone())
    };
    let mut label = opts.label;
    if !(opts.collaborative && setting.uses_intentions()) {
        label.n_best = 1;
    }
    let candidates = lh_search(instance, agent, &ctx, &origin, &label);
    if label.n_best == 1 {
        return candidates.into_iter().next().expect("lh_search returns a policy");
    }
    select_joint_best(instance, &priors, candidates, &base_p, opts, agent)
}

/// Candidate minimizing the cost of `others` plus the candidate, evaluated
/// jointly. Ties keep the earlier candidate.
pub(crate) fn select_joint_best(
    instance: &Instance,
    others: &[SearchPolicy],
    candidates: Vec<SearchPolicy>,
    base_p: &[f64],
    opts: &PlanOptions,
    focal: usize,
) -> SearchPolicy {
    let mut set: Vec<SearchPolicy> = others.to_vec();
    let mut best: Option<(Minutes, SearchPolicy)> = None;
    for cand in candidates {
        set.push(cand);
        let triples = evaluate_policy_set(&set, instance, base_p, opts.rule, opts.peers, focal);
        let cost = triples_cost(triples, instance.beta_global);
        let cand = set.pop().expect("just pushed");
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, cand));
        }
    }
    best.expect("lh_search returns a policy").1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::model::{NodeId, Visit};
    use crate::probability::{build_policy, joint_cost};
    use alloc::vec;

    fn two_agents(pa: f64, pb: f64) -> Instance {
        let g = two_station(pa, pb);
        let s = g.origin_node(0);
        Instance::new(g, vec![agent(0, 0.0, s, 5.0, 10.0), agent(1, 0.0, s, 5.0, 10.0)], 700.0).unwrap()
    }

    #[test]
    fn dec_ignores_the_board() {
        let inst = two_agents(0.5, 0.5);
        let opts = PlanOptions::default();
        let first = plan_request(&inst, 0, &SharedBoard::default(), StaticSetting::Dec, &opts);
        let mut board = SharedBoard::default();
        board.intentions.push(first.clone());
        board.observations.insert(StationId(0), 0.0);
        let second = plan_request(&inst, 1, &board, StaticSetting::Dec, &opts);
        assert_eq!(first.visits, second.visits);
    }

    #[test]
    fn dec_o_avoids_observed_stations() {
        let inst = two_agents(0.5, 0.5);
        let mut board = SharedBoard::default();
        board.observations.insert(StationId(0), 0.0);
        let plan = plan_request(&inst, 1, &board, StaticSetting::DecO, &PlanOptions::default());
        assert!(plan.arrival_at(StationId(0)).is_none());
        assert!(!plan.is_empty());
    }

    #[test]
    fn collaborative_matches_exhaustive_argmin() {
        let inst = two_agents(0.5, 0.5);
        let opts = PlanOptions {
            label: LabelOptions {
                n_best: usize::MAX,
                dominance: false,
                ..LabelOptions::default()
            },
            collaborative: true,
            ..PlanOptions::default()
        };
        let first = plan_request(&inst, 0, &SharedBoard::default(), StaticSetting::Dec, &opts);
        let mut board = SharedBoard::default();
        board.intentions.push(first.clone());
        let chosen = plan_request(&inst, 1, &board, StaticSetting::DecI, &opts);

        let ind = AvailabilityContext::independent(inst.graph.base_probabilities());
        let seqs = [vec![0], vec![1], vec![0, 1], vec![1, 0]];
        let best = seqs
            .iter()
            .map(|s| {
                let ids: Vec<StationId> = s.iter().map(|&i| StationId(i)).collect();
                let p = build_policy(&inst, 1, &ids, &ind).unwrap();
                joint_cost(&[first.clone(), p], &inst, ConflictRule::Inclusive)
            })
            .fold(f64::INFINITY, f64::min);
        let got = joint_cost(&[first, chosen], &inst, ConflictRule::Inclusive);
        assert!((got - best).abs() < 1e-12);
    }

    #[test]
    fn collaborative_never_worse_than_selfish() {
        let inst = two_agents(0.4, 0.7);
        let mut opts = PlanOptions::default();
        let first = plan_request(&inst, 0, &SharedBoard::default(), StaticSetting::Dec, &opts);
        let mut board = SharedBoard::default();
        board.intentions.push(first.clone());
        let selfish = plan_request(&inst, 1, &board, StaticSetting::DecI, &opts);
        opts.collaborative = true;
        let collab = plan_request(&inst, 1, &board, StaticSetting::DecI, &opts);
        let c = |p: SearchPolicy| joint_cost(&[first.clone(), p], &inst, ConflictRule::Inclusive);
        assert!(c(collab) <= c(selfish) + 1e-12);
    }

    #[test]
    fn truncation() {
        let pol = SearchPolicy {
            agent: 0,
            origin: NodeId(2),
            depart: 0.0,
            visits: vec![
                Visit {
                    station: StationId(0),
                    arrival: 1.0,
                },
                Visit {
                    station: StationId(1),
                    arrival: 2.0,
                },
            ],
            cost: Default::default(),
        };
        let none = BTreeSet::new();
        assert_eq!(
            truncate_intentions(core::slice::from_ref(&pol), 0.5, &none),
            vec![pol.clone()]
        );
        assert!(truncate_intentions(core::slice::from_ref(&pol), 3.0, &none).is_empty());
        let mid = truncate_intentions(core::slice::from_ref(&pol), 1.5, &none);
        assert_eq!(
            mid[0].visits,
            vec![Visit {
                station: StationId(1),
                arrival: 2.0
            }]
        );
        assert_eq!(mid[0].origin, NodeId(0));
        let done: BTreeSet<usize> = [0].into_iter().collect();
        assert!(truncate_intentions(&[pol], 0.5, &done).is_empty());
    }
}
