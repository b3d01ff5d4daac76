//! Availability probabilities and the (A, rho, alpha) cost algebra.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{CostTriple, Instance, Minutes, NodeId, SearchPolicy, StationId, Visit, EPS};

/// How an earlier visitor's success enters another agent's availability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConflictRule {
    /// `p_v * prod rho^j(t^j_v)` with rho^j including the shared visit and
    /// prior visits counted when `t^j_v <= t`.
    #[default]
    Inclusive,
    /// Only success strictly before the shared visit counts.
    StrictPrefix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Base probabilities only; other agents are ignored.
    Independent,
    /// Availabilities discounted by the intentions of prior agents.
    Dependent,
}

/// Whose penalty and usage costs are used for the other agents when a
/// decision maker evaluates a joint cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PeerKnowledge {
    /// Every agent's own parameters are known.
    #[default]
    Shared,
    /// Other agents are assumed to share the decision maker's penalty and
    /// usage costs.
    AssumeOwn,
}

/// Availability model seen by one planning agent.
#[derive(Debug, Clone, PartialEq)]
pub struct AvailabilityContext {
    base_p: Vec<f64>,
    mode: Mode,
    rule: ConflictRule,
    /// Per station: (visit time, factor) of prior agents, sorted by time.
    factors: Vec<Vec<(Minutes, f64)>>,
}

impl AvailabilityContext {
    pub fn independent(base_p: Vec<f64>) -> Self {
        let n = base_p.len();
        Self {
            base_p,
            mode: Mode::Independent,
            rule: ConflictRule::Inclusive,
            factors: alloc::vec![Vec::new(); n],
        }
    }

    /// Context for an agent planning after `priors` (in processing order).
    /// The priors are evaluated among themselves first.
    pub fn dependent(base_p: Vec<f64>, priors: &[&[Visit]], rule: ConflictRule) -> Self {
        let mut factors = alloc::vec![Vec::new(); base_p.len()];
        for (visit, _, factor) in evaluate_visits(priors, &base_p, rule).into_iter().flatten() {
            factors[visit.station.0].push((visit.arrival, factor));
        }
        for list in &mut factors {
            list.sort_by(|a: &(f64, f64), b| a.0.total_cmp(&b.0));
        }
        Self {
            base_p,
            mode: Mode::Dependent,
            rule,
            factors,
        }
    }

    pub fn from_policies(base_p: Vec<f64>, priors: &[SearchPolicy], rule: ConflictRule) -> Self {
        let visits: Vec<&[Visit]> = priors.iter().map(|p| p.visits.as_slice()).collect();
        Self::dependent(base_p, &visits, rule)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn rule(&self) -> ConflictRule {
        self.rule
    }

    pub fn base_p(&self) -> &[f64] {
        &self.base_p
    }

    /// Availability of `v` for an agent arriving at `t`.
    pub fn availability(&self, v: StationId, t: Minutes) -> f64 {
        let p = self.base_p[v.0];
        if self.mode == Mode::Independent {
            return p;
        }
        self.factors[v.0]
            .iter()
            .take_while(|(tj, _)| *tj <= t)
            .fold(p, |acc, (_, f)| acc * f)
    }
}

/// Evaluates each visit of a set of visit sequences against all other
/// sequences. Returns per sequence and visit: the visit, its availability,
/// and the factor it contributes to later visitors of the same station.
///
/// Visits are processed by (time, sequence index, position), so equal-time
/// visits are ranked by sequence order.
pub fn evaluate_visits(sequences: &[&[Visit]], base_p: &[f64], rule: ConflictRule) -> Vec<Vec<(Visit, f64, f64)>> {
    let mut order: Vec<(Minutes, usize, usize)> = sequences
        .iter()
        .enumerate()
        .flat_map(|(j, seq)| seq.iter().enumerate().map(move |(k, v)| (v.arrival, j, k)))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut out: Vec<Vec<(Visit, f64, f64)>> = sequences
        .iter()
        .map(|seq| seq.iter().map(|v| (*v, 0.0, 1.0)).collect())
        .collect();
    let mut fail = alloc::vec![1.0; sequences.len()];
    let mut claims: Vec<Vec<(usize, f64)>> = alloc::vec![Vec::new(); base_p.len()];
    for (_, j, k) in order {
        let visit = sequences[j][k];
        let s = visit.station.0;
        let p = claims[s]
            .iter()
            .filter(|(owner, _)| *owner != j)
            .fold(base_p[s], |acc, (_, f)| acc * f);
        let factor = match rule {
            ConflictRule::Inclusive => 1.0 - fail[j] * (1.0 - p),
            ConflictRule::StrictPrefix => 1.0 - fail[j],
        };
        fail[j] *= 1.0 - p;
        claims[s].push((j, factor));
        out[j][k] = (visit, p, factor);
    }
    out
}

/// `p^i_v(t)`: the prior `p_v` discounted by every prior agent that visits
/// `v` no later than `t`.
pub fn user_dependent_availability(v: StationId, t: Minutes, ctx: &AvailabilityContext) -> f64 {
    ctx.availability(v, t)
}

/// `rho^i(t)`: probability that the policy found a free station among the
/// visits planned no later than `t`.
pub fn prefix_success(policy: &SearchPolicy, t: Minutes, ctx: &AvailabilityContext) -> f64 {
    let fail = policy
        .visits
        .iter()
        .take_while(|v| v.arrival <= t)
        .fold(1.0, |acc, v| acc * (1.0 - ctx.availability(v.station, v.arrival)));
    1.0 - fail
}

/// Cost triple of a sequence given per visit (leg travel time, availability,
/// usage cost).
pub fn cost_of_legs(legs: impl IntoIterator<Item = (Minutes, f64, Minutes)>, penalty: Minutes) -> CostTriple {
    let mut a = 0.0;
    let mut fail = 1.0;
    for (travel, p, gamma) in legs {
        a += travel * fail + gamma * p * fail;
        fail *= 1.0 - p;
    }
    CostTriple {
        a,
        rho: 1.0 - fail,
        alpha: a + fail * penalty,
    }
}

/// Arrival times of `stations` visited in order from `origin` at `depart`.
pub fn schedule(instance: &Instance, origin: NodeId, depart: Minutes, stations: &[StationId]) -> Vec<Visit> {
    let mut at = origin;
    let mut clock = depart;
    stations
        .iter()
        .map(|&s| {
            clock += instance.graph.travel(at, s.node());
            at = s.node();
            Visit {
                station: s,
                arrival: clock,
            }
        })
        .collect()
}

/// Checks repeats, radius and budget of a visit sequence for `agent`.
pub fn check_feasible(instance: &Instance, agent: usize, visits: &[Visit]) -> Result<()> {
    let spec = &instance.agents[agent];
    let mut seen = BTreeSet::new();
    for v in visits {
        if v.station.0 >= instance.graph.num_stations() {
            return Err(Error::UnknownStation(v.station));
        }
        if !seen.insert(v.station) {
            return Err(Error::RepeatedStation {
                agent: spec.id,
                station: v.station,
            });
        }
        if !instance.within_radius(agent, v.station) {
            return Err(Error::OutsideRadius {
                agent: spec.id,
                station: v.station,
            });
        }
        if v.arrival - spec.t0 > spec.budget + EPS {
            return Err(Error::OverBudget {
                agent: spec.id,
                station: v.station,
            });
        }
    }
    Ok(())
}

/// Builds agent `agent`'s policy visiting `stations` in order, starting at
/// `origin` at time `depart`, and evaluates it under `ctx`.
pub fn policy_cost(
    instance: &Instance,
    agent: usize,
    origin: NodeId,
    depart: Minutes,
    stations: &[StationId],
    ctx: &AvailabilityContext,
) -> Result<SearchPolicy> {
    let visits = schedule(instance, origin, depart, stations);
    check_feasible(instance, agent, &visits)?;
    let spec = &instance.agents[agent];
    let mut at = origin;
    let legs: Vec<(Minutes, f64, Minutes)> = visits
        .iter()
        .map(|v| {
            let travel = instance.graph.travel(at, v.station.node());
            at = v.station.node();
            (travel, ctx.availability(v.station, v.arrival), spec.gamma(v.station))
        })
        .collect();
    let cost = cost_of_legs(legs, spec.penalty);
    Ok(SearchPolicy {
        agent,
        origin,
        depart,
        visits,
        cost,
    })
}

/// Policy from the agent's start location at its departure time.
pub fn build_policy(
    instance: &Instance,
    agent: usize,
    stations: &[StationId],
    ctx: &AvailabilityContext,
) -> Result<SearchPolicy> {
    let spec = &instance.agents[agent];
    policy_cost(instance, agent, spec.start, spec.t0, stations, ctx)
}

/// `sum alpha^i + (1 - prod rho^i) * beta^G` over stored cost triples.
pub fn system_cost(policies: &[SearchPolicy], beta_global: Minutes) -> Minutes {
    triples_cost(policies.iter().map(|p| p.cost), beta_global)
}

pub fn triples_cost(triples: impl IntoIterator<Item = CostTriple>, beta_global: Minutes) -> Minutes {
    let (sum, all) = triples
        .into_iter()
        .fold((0.0, 1.0), |(s, r), c| (s + c.alpha, r * c.rho));
    sum + (1.0 - all) * beta_global
}

/// Re-evaluates every policy of the set against all the others, with
/// station availabilities `base_p`. `focal` is the decision maker, whose
/// parameters stand in for everybody under [`PeerKnowledge::AssumeOwn`].
pub fn evaluate_policy_set(
    policies: &[SearchPolicy],
    instance: &Instance,
    base_p: &[f64],
    rule: ConflictRule,
    peers: PeerKnowledge,
    focal: usize,
) -> Vec<CostTriple> {
    let seqs: Vec<&[Visit]> = policies.iter().map(|p| p.visits.as_slice()).collect();
    let evaluated = evaluate_visits(&seqs, base_p, rule);
    policies
        .iter()
        .zip(evaluated)
        .map(|(policy, visits)| {
            let spec = match peers {
                PeerKnowledge::Shared => &instance.agents[policy.agent],
                PeerKnowledge::AssumeOwn => &instance.agents[focal],
            };
            let mut at = policy.origin;
            let legs = visits.into_iter().map(|(v, p, _)| {
                let travel = instance.graph.travel(at, v.station.node());
                at = v.station.node();
                (travel, p, spec.gamma(v.station))
            });
            cost_of_legs(legs, spec.penalty)
        })
        .collect()
}

/// Joint cost of a policy set with every policy evaluated against all others
/// and every agent's own parameters.
pub fn joint_cost(policies: &[SearchPolicy], instance: &Instance, rule: ConflictRule) -> Minutes {
    let base_p = instance.graph.base_probabilities();
    triples_cost(
        evaluate_policy_set(policies, instance, &base_p, rule, PeerKnowledge::Shared, 0),
        instance.beta_global,
    )
}

/// Probability that an observed-occupied station is free again after
/// `delta` minutes: `p (1 - exp(-(mu / p) delta))`, zero when `p = 0`.
pub fn recovered_occupied_prob(p: f64, mu: f64, delta: Minutes) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    p * (1.0 - libm::exp(-(mu / p) * delta))
}

/// Probability that an observed-free station is still free after `delta`
/// minutes: `p + (1 - p) exp(-(mu / p) delta)`.
pub fn recovered_available_prob(p: f64, mu: f64, delta: Minutes) -> Result<f64> {
    if p <= 0.0 {
        return Err(Error::ZeroProbability);
    }
    Ok(p + (1.0 - p) * libm::exp(-(mu / p) * delta))
}
