//! Instances, agents and the centralized search state machine.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::probability;

/// Time (and time-equivalent cost) in minutes.
pub type Minutes = f64;

/// Slack for budget and radius comparisons on accumulated sums.
pub const EPS: f64 = 1e-9;

/// Index of a charging station in [`StationGraph::stations`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StationId(pub usize);

/// Index of a node of the travel matrix. Stations come first, agent start
/// locations after them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl StationId {
    pub fn node(self) -> NodeId {
        NodeId(self.0)
    }
}

impl From<StationId> for NodeId {
    fn from(s: StationId) -> Self {
        s.node()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Station {
    /// External identifier, as found in instance files.
    pub id: u32,
    /// Coordinates in meters.
    pub x: f64,
    pub y: f64,
    /// Probability that the station is free before any visit.
    pub p: f64,
    /// Recovery rate per minute; `1 / mu` is the mean occupied duration.
    pub mu: f64,
}

/// Stations plus a complete travel-time matrix over stations and agent
/// start locations.
#[derive(Debug, Clone, PartialEq)]
pub struct StationGraph {
    stations: Vec<Station>,
    origins: Vec<(f64, f64)>,
    travel: Vec<Minutes>,
    metric: bool,
}

impl StationGraph {
    /// Builds a graph whose travel times are Euclidean distances driven at
    /// `speed_kmh`. Such graphs satisfy the triangle inequality.
    pub fn from_coordinates(stations: Vec<Station>, origins: Vec<(f64, f64)>, speed_kmh: f64) -> Result<Self> {
        if !(speed_kmh > 0.0 && speed_kmh.is_finite()) {
            return Err(Error::InvalidInstance("travel speed must be positive"));
        }
        check_stations(&stations)?;
        let meters_per_minute = speed_kmh * 1000.0 / 60.0;
        let points: Vec<(f64, f64)> = stations
            .iter()
            .map(|s| (s.x, s.y))
            .chain(origins.iter().copied())
            .collect();
        let n = points.len();
        let mut travel = alloc::vec![0.0; n * n];
        for (a, pa) in points.iter().enumerate() {
            for (b, pb) in points.iter().enumerate() {
                if a != b {
                    travel[a * n + b] = euclid(*pa, *pb) / meters_per_minute;
                }
            }
        }
        Ok(Self {
            stations,
            origins,
            travel,
            metric: true,
        })
    }

    /// Builds a graph from an explicit row-major travel matrix over
    /// `stations.len() + origins.len()` nodes. The metric flag is left unset.
    pub fn from_matrix(stations: Vec<Station>, origins: Vec<(f64, f64)>, travel: Vec<Minutes>) -> Result<Self> {
        check_stations(&stations)?;
        let n = stations.len() + origins.len();
        if travel.len() != n * n {
            return Err(Error::MatrixShape {
                expected: n * n,
                got: travel.len(),
            });
        }
        for from in 0..n {
            for to in 0..n {
                let value = travel[from * n + to];
                let bad = !value.is_finite() || value < 0.0 || (from == to && value != 0.0);
                if bad {
                    return Err(Error::InvalidTravelTime { from, to, value });
                }
            }
        }
        Ok(Self {
            stations,
            origins,
            travel,
            metric: false,
        })
    }

    pub fn stations(&self) -> &[Station] {
        &self.stations
    }

    pub fn station(&self, s: StationId) -> &Station {
        &self.stations[s.0]
    }

    pub fn num_stations(&self) -> usize {
        self.stations.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.stations.len() + self.origins.len()
    }

    pub fn station_ids(&self) -> impl Iterator<Item = StationId> + '_ {
        (0..self.stations.len()).map(StationId)
    }

    /// Node of the `k`-th start location.
    pub fn origin_node(&self, k: usize) -> NodeId {
        NodeId(self.stations.len() + k)
    }

    pub fn origins(&self) -> &[(f64, f64)] {
        &self.origins
    }

    pub fn as_station(&self, node: NodeId) -> Option<StationId> {
        (node.0 < self.stations.len()).then_some(StationId(node.0))
    }

    pub fn position(&self, node: NodeId) -> (f64, f64) {
        match self.as_station(node) {
            Some(s) => (self.stations[s.0].x, self.stations[s.0].y),
            None => self.origins[node.0 - self.stations.len()],
        }
    }

    pub fn travel(&self, from: NodeId, to: NodeId) -> Minutes {
        self.travel[from.0 * self.num_nodes() + to.0]
    }

    /// Straight-line distance in meters.
    pub fn distance(&self, a: NodeId, b: NodeId) -> f64 {
        euclid(self.position(a), self.position(b))
    }

    pub fn is_metric(&self) -> bool {
        self.metric
    }

    pub fn base_probabilities(&self) -> Vec<f64> {
        self.stations.iter().map(|s| s.p).collect()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        node.0 < self.num_nodes()
    }
}

fn check_stations(stations: &[Station]) -> Result<()> {
    for (i, s) in stations.iter().enumerate() {
        if !(0.0..=1.0).contains(&s.p) {
            return Err(Error::InvalidProbability { station: i, value: s.p });
        }
        if !(s.mu >= 0.0) {
            return Err(Error::InvalidInstance("recovery rate must be >= 0"));
        }
    }
    Ok(())
}

fn euclid(a: (f64, f64), b: (f64, f64)) -> f64 {
    libm::hypot(a.0 - b.0, a.1 - b.1)
}

/// One driver's charging request.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentSpec {
    pub id: usize,
    /// Departure time.
    pub t0: Minutes,
    pub start: NodeId,
    /// Search time budget.
    pub budget: Minutes,
    /// Search radius in meters, measured from `start`.
    pub radius: f64,
    /// Individual failure penalty.
    pub penalty: Minutes,
    /// Station usage cost per station index. Empty means zero everywhere.
    pub usage_cost: Vec<Minutes>,
}

impl AgentSpec {
    pub fn new(id: usize, t0: Minutes, start: NodeId, budget: Minutes, radius: f64, penalty: Minutes) -> Self {
        Self {
            id,
            t0,
            start,
            budget,
            radius,
            penalty,
            usage_cost: Vec::new(),
        }
    }

    pub fn with_usage_cost(mut self, usage_cost: Vec<Minutes>) -> Self {
        self.usage_cost = usage_cost;
        self
    }

    pub fn gamma(&self, s: StationId) -> Minutes {
        self.usage_cost.get(s.0).copied().unwrap_or(0.0)
    }

    pub fn fits_budget(&self, elapsed: Minutes) -> bool {
        elapsed <= self.budget + EPS
    }
}

/// Time-dependent recovery of observed stations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Recovery {
    pub enabled: bool,
    /// Observations younger than this stay excluded from the action space.
    pub t_thres: Minutes,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub graph: StationGraph,
    /// Agents ordered by departure time, ties by id. Agents are referred to
    /// by their position in this list everywhere else.
    pub agents: Vec<AgentSpec>,
    pub beta_global: Minutes,
    pub recovery: Recovery,
}

impl Instance {
    pub fn new(graph: StationGraph, mut agents: Vec<AgentSpec>, beta_global: Minutes) -> Result<Self> {
        if !(beta_global >= 0.0) {
            return Err(Error::InvalidInstance("global penalty must be >= 0"));
        }
        for a in &agents {
            if !(a.budget > 0.0) {
                return Err(Error::InvalidAgent {
                    agent: a.id,
                    reason: "budget must be > 0",
                });
            }
            if !(a.radius > 0.0) {
                return Err(Error::InvalidAgent {
                    agent: a.id,
                    reason: "radius must be > 0",
                });
            }
            if !(a.penalty >= 0.0) {
                return Err(Error::InvalidAgent {
                    agent: a.id,
                    reason: "penalty must be >= 0",
                });
            }
            if a.usage_cost.iter().any(|g| !(*g >= 0.0)) {
                return Err(Error::InvalidAgent {
                    agent: a.id,
                    reason: "usage costs must be >= 0",
                });
            }
            if !graph.contains(a.start) {
                return Err(Error::UnknownNode(a.start));
            }
        }
        agents.sort_by(|a, b| a.t0.total_cmp(&b.t0).then(a.id.cmp(&b.id)));
        Ok(Self {
            graph,
            agents,
            beta_global,
            recovery: Recovery::default(),
        })
    }

    pub fn with_recovery(mut self, recovery: Recovery) -> Self {
        self.recovery = recovery;
        self
    }

    pub fn agent(&self, idx: usize) -> &AgentSpec {
        &self.agents[idx]
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn within_radius(&self, agent: usize, s: StationId) -> bool {
        let a = &self.agents[agent];
        self.graph.distance(a.start, s.node()) <= a.radius + EPS
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Visit {
    pub station: StationId,
    /// Planned arrival time (absolute clock).
    pub arrival: Minutes,
}

/// Expected travel-plus-usage cost `a`, success probability `rho` and total
/// cost `alpha = a + (1 - rho) * penalty`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CostTriple {
    pub a: Minutes,
    pub rho: f64,
    pub alpha: Minutes,
}

/// An ordered station-visit sequence for one agent, followed until the first
/// free station.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchPolicy {
    /// Agent index in [`Instance::agents`].
    pub agent: usize,
    /// Where the sequence starts: the start location, or the current station
    /// when re-planning mid-search.
    pub origin: NodeId,
    /// Clock at `origin`.
    pub depart: Minutes,
    pub visits: Vec<Visit>,
    pub cost: CostTriple,
}

impl SearchPolicy {
    pub fn stations(&self) -> impl Iterator<Item = StationId> + '_ {
        self.visits.iter().map(|v| v.station)
    }

    pub fn first_station(&self) -> Option<StationId> {
        self.visits.first().map(|v| v.station)
    }

    pub fn len(&self) -> usize {
        self.visits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.visits.is_empty()
    }

    pub fn arrival_at(&self, s: StationId) -> Option<Minutes> {
        self.visits.iter().find(|v| v.station == s).map(|v| v.arrival)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AgentStatus {
    /// Observed an occupied station (or just requested) and must pick a next
    /// station.
    Deciding,
    Found,
    Failed,
    EnRoute,
}

impl AgentStatus {
    pub fn is_terminal(self) -> bool {
        matches!(self, AgentStatus::Found | AgentStatus::Failed)
    }

    /// One-letter code: d, f, t, r.
    pub fn code(self) -> char {
        match self {
            AgentStatus::Deciding => 'd',
            AgentStatus::Found => 'f',
            AgentStatus::Failed => 't',
            AgentStatus::EnRoute => 'r',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentState {
    /// Station assigned to the agent (its target when en route).
    pub node: NodeId,
    /// Arrival time at `node`.
    pub arrival: Minutes,
    pub status: AgentStatus,
}

/// Next event of a [`SystemState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Event {
    Depart {
        agent: usize,
        time: Minutes,
    },
    Arrive {
        agent: usize,
        station: StationId,
        time: Minutes,
    },
}

/// Centralized state: per-agent states, active and terminated sets, and the
/// observed stations with their last observation time.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    /// `None` for agents that have not requested a search yet.
    pub agents: Vec<Option<AgentState>>,
    pub active: BTreeSet<usize>,
    pub terminated: BTreeSet<usize>,
    pub observed: BTreeMap<StationId, Minutes>,
    pub clock: Minutes,
}

impl SystemState {
    pub fn initial(instance: &Instance) -> Self {
        Self {
            agents: alloc::vec![None; instance.num_agents()],
            active: BTreeSet::new(),
            terminated: BTreeSet::new(),
            observed: BTreeMap::new(),
            clock: 0.0,
        }
    }

    pub fn agent(&self, i: usize) -> Option<&AgentState> {
        self.agents.get(i).and_then(Option::as_ref)
    }

    pub fn is_observed(&self, s: StationId) -> bool {
        self.observed.contains_key(&s)
    }

    pub fn any_failed(&self) -> bool {
        self.agents.iter().flatten().any(|a| a.status == AgentStatus::Failed)
    }

    /// Every agent of the instance has terminated.
    pub fn is_terminal(&self) -> bool {
        self.terminated.len() == self.agents.len()
    }

    /// Lowest-index agent waiting for an action.
    pub fn deciding_agent(&self) -> Option<usize> {
        self.active
            .iter()
            .copied()
            .find(|&i| matches!(self.agent(i), Some(a) if a.status == AgentStatus::Deciding))
    }

    /// Earliest pending departure or arrival, ties by agent index.
    pub fn next_event(&self, instance: &Instance, with_departures: bool) -> Option<Event> {
        let mut best: Option<(Minutes, usize, Event)> = None;
        for (i, slot) in self.agents.iter().enumerate() {
            let candidate = match slot {
                None if with_departures => {
                    let time = instance.agents[i].t0;
                    Some((time, Event::Depart { agent: i, time }))
                }
                Some(a) if a.status == AgentStatus::EnRoute => {
                    let station = instance
                        .graph
                        .as_station(a.node)
                        .expect("en-route agents target stations");
                    Some((
                        a.arrival,
                        Event::Arrive {
                            agent: i,
                            station,
                            time: a.arrival,
                        },
                    ))
                }
                _ => None,
            };
            if let Some((time, ev)) = candidate {
                let better = match &best {
                    None => true,
                    Some((bt, bi, _)) => time < *bt || (time == *bt && i < *bi),
                };
                if better {
                    best = Some((time, i, ev));
                }
            }
        }
        best.map(|(_, _, ev)| ev)
    }

    /// Agent `i` requests a search at its departure time.
    pub fn depart(&self, instance: &Instance, i: usize) -> Result<Self> {
        let spec = instance.agents.get(i).ok_or(Error::UnknownAgent(i))?;
        if self.agents[i].is_some() {
            return Err(Error::InvalidTransition {
                agent: i,
                reason: "agent already departed",
            });
        }
        let mut next = self.clone();
        next.agents[i] = Some(AgentState {
            node: spec.start,
            arrival: spec.t0,
            status: AgentStatus::Deciding,
        });
        next.active.insert(i);
        next.clock = spec.t0;
        Ok(next)
    }

    /// En-route agent `i` reaches its station and observes it.
    pub fn observe(&self, instance: &Instance, i: usize, available: bool) -> Result<(Self, Minutes)> {
        let state = *self.agent(i).ok_or(Error::InvalidTransition {
            agent: i,
            reason: "agent has not departed",
        })?;
        if state.status.is_terminal() {
            return Err(Error::AbsorbingStatus(i));
        }
        if state.status != AgentStatus::EnRoute {
            return Err(Error::InvalidTransition {
                agent: i,
                reason: "only en-route agents observe a station",
            });
        }
        let station = instance
            .graph
            .as_station(state.node)
            .ok_or(Error::UnknownStation(StationId(state.node.0)))?;
        let mut next = self.clone();
        next.clock = state.arrival;
        next.observed.insert(station, state.arrival);
        let mut cost = 0.0;
        let slot = next.agents[i].as_mut().expect("checked above");
        if available {
            slot.status = AgentStatus::Found;
            cost += instance.agents[i].gamma(station);
            next.finish(instance, i, &mut cost);
        } else {
            slot.status = AgentStatus::Deciding;
        }
        Ok((next, cost))
    }

    /// Deciding agent `i` drives to `action`, or gives up when `None`.
    pub fn decide(&self, instance: &Instance, i: usize, action: Option<StationId>) -> Result<(Self, Minutes)> {
        let state = *self.agent(i).ok_or(Error::InvalidTransition {
            agent: i,
            reason: "agent has not departed",
        })?;
        if state.status.is_terminal() {
            return Err(Error::AbsorbingStatus(i));
        }
        if state.status != AgentStatus::Deciding {
            return Err(Error::InvalidTransition {
                agent: i,
                reason: "agent is not deciding",
            });
        }
        let mut next = self.clone();
        next.clock = state.arrival;
        let mut cost;
        match action {
            Some(v) => {
                if v.0 >= instance.graph.num_stations() {
                    return Err(Error::UnknownStation(v));
                }
                if !reachable_actions(self, i, instance).contains(&v) {
                    if self.is_observed(v) {
                        return Err(Error::ObservedStation(v));
                    }
                    return Err(Error::InvalidTransition {
                        agent: i,
                        reason: "station not reachable within radius and budget",
                    });
                }
                cost = instance.graph.travel(state.node, v.node());
                let slot = next.agents[i].as_mut().expect("checked above");
                slot.node = v.node();
                slot.arrival = state.arrival + cost;
                slot.status = AgentStatus::EnRoute;
            }
            None => {
                cost = instance.agents[i].penalty;
                next.agents[i].as_mut().expect("checked above").status = AgentStatus::Failed;
                next.finish(instance, i, &mut cost);
            }
        }
        Ok((next, cost))
    }

    fn finish(&mut self, instance: &Instance, i: usize, cost: &mut Minutes) {
        self.active.remove(&i);
        self.terminated.insert(i);
        if self.is_terminal() && self.any_failed() {
            *cost += instance.beta_global;
        }
    }
}

/// Stations the agent may drive to next: unobserved (or recovered past the
/// observation threshold), inside its radius, and reachable within its
/// remaining budget. Returned in increasing station order; empty means the
/// agent fails.
pub fn reachable_actions(state: &SystemState, agent: usize, instance: &Instance) -> Vec<StationId> {
    let Some(st) = state.agent(agent) else {
        return Vec::new();
    };
    let spec = &instance.agents[agent];
    let elapsed = st.arrival - spec.t0;
    instance
        .graph
        .station_ids()
        .filter(|&s| s.node() != st.node)
        .filter(|&s| match state.observed.get(&s) {
            None => true,
            Some(&seen) => instance.recovery.enabled && st.arrival - seen > instance.recovery.t_thres,
        })
        .filter(|&s| instance.within_radius(agent, s))
        .filter(|&s| spec.fits_budget(elapsed + instance.graph.travel(st.node, s.node())))
        .collect()
}

/// Availability probability of a candidate station as seen from `state` at
/// time `now`: the prior for unobserved stations, the recovered probability
/// for re-admitted observed ones.
pub fn action_probability(state: &SystemState, instance: &Instance, s: StationId, now: Minutes) -> f64 {
    let station = instance.graph.station(s);
    match state.observed.get(&s) {
        None => station.p,
        Some(&seen) if instance.recovery.enabled => {
            probability::recovered_occupied_prob(station.p, station.mu, (now - seen).max(0.0))
        }
        Some(_) => 0.0,
    }
}

/// One step of the centralized process for `agent`.
///
/// - Not yet departed: the agent requests a search, then `action` is applied.
/// - En route: `observation` must be given. Available ends the search with
///   the usage cost; occupied is followed by `action`.
/// - Deciding: `action` is applied directly.
///
/// An action of `None` for a deciding agent is a failure costing its
/// penalty. The global penalty is added once, on the transition that
/// terminates the last agent, if any agent failed.
pub fn apply_transition(
    state: &SystemState,
    instance: &Instance,
    agent: usize,
    action: Option<StationId>,
    observation: Option<bool>,
) -> Result<(SystemState, Minutes)> {
    if agent >= instance.num_agents() {
        return Err(Error::UnknownAgent(agent));
    }
    match state.agent(agent).map(|a| a.status) {
        None => {
            if observation.is_some() {
                return Err(Error::InvalidTransition {
                    agent,
                    reason: "a departing agent observes nothing",
                });
            }
            let departed = state.depart(instance, agent)?;
            departed.decide(instance, agent, action)
        }
        Some(s) if s.is_terminal() => Err(Error::AbsorbingStatus(agent)),
        Some(AgentStatus::EnRoute) => {
            let available = observation.ok_or(Error::InvalidTransition {
                agent,
                reason: "an arriving agent must observe its station",
            })?;
            let (observed, cost) = state.observe(instance, agent, available)?;
            if available {
                if action.is_some() {
                    return Err(Error::InvalidTransition {
                        agent,
                        reason: "an agent that found a station takes no action",
                    });
                }
                return Ok((observed, cost));
            }
            let (next, more) = observed.decide(instance, agent, action)?;
            Ok((next, cost + more))
        }
        Some(_) => {
            if observation.is_some() {
                return Err(Error::InvalidTransition {
                    agent,
                    reason: "a deciding agent has nothing to observe",
                });
            }
            state.decide(instance, agent, action)
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn station(id: u32, p: f64) -> Station {
        Station {
            id,
            x: 0.0,
            y: 0.0,
            p,
            mu: 0.0,
        }
    }

    /// Graph over `stations` and `origins` start nodes with a symmetric
    /// travel matrix given as upper-triangle closures.
    pub fn matrix_graph(stations: Vec<Station>, origins: usize, travel: impl Fn(usize, usize) -> f64) -> StationGraph {
        let n = stations.len() + origins;
        let mut m = alloc::vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    m[a * n + b] = travel(a.min(b), a.max(b));
                }
            }
        }
        StationGraph::from_matrix(stations, alloc::vec![(0.0, 0.0); origins], m).unwrap()
    }

    /// Two stations A (0) and B (1) plus one start node (2):
    /// start->A = 1, start->B = 2, A->B = 1.
    pub fn two_station(pa: f64, pb: f64) -> StationGraph {
        matrix_graph(alloc::vec![station(0, pa), station(1, pb)], 1, |a, b| match (a, b) {
            (0, 1) => 1.0,
            (0, 2) => 1.0,
            (1, 2) => 2.0,
            _ => unreachable!(),
        })
    }

    pub fn agent(id: usize, t0: f64, start: NodeId, budget: f64, penalty: f64) -> AgentSpec {
        AgentSpec::new(id, t0, start, budget, 1e9, penalty)
    }

    pub fn single_agent(graph: StationGraph, budget: f64, penalty: f64, beta_g: f64) -> Instance {
        let start = graph.origin_node(0);
        Instance::new(graph, alloc::vec![agent(0, 0.0, start, budget, penalty)], beta_g).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use alloc::vec;

    #[test]
    fn coordinates_give_metric_travel_times() {
        let stations = vec![
            Station {
                id: 7,
                x: 0.0,
                y: 0.0,
                p: 0.5,
                mu: 0.1,
            },
            Station {
                id: 9,
                x: 300.0,
                y: 400.0,
                p: 0.5,
                mu: 0.1,
            },
        ];
        let g = StationGraph::from_coordinates(stations, vec![(0.0, 300.0)], 18.0).unwrap();
        assert!(g.is_metric());
        // 500 m at 300 m/min
        assert!((g.travel(NodeId(0), NodeId(1)) - 500.0 / 300.0).abs() < 1e-12);
        assert_eq!(g.travel(NodeId(1), NodeId(1)), 0.0);
        assert_eq!(g.origin_node(0), NodeId(2));
        assert!((g.distance(NodeId(2), NodeId(0)) - 300.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let err = StationGraph::from_matrix(vec![station(0, 1.5)], vec![], vec![0.0]).unwrap_err();
        assert!(matches!(err, Error::InvalidProbability { .. }));
        let err =
            StationGraph::from_matrix(vec![station(0, 0.5)], vec![(0.0, 0.0)], vec![0.0, -1.0, 1.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::InvalidTravelTime { .. }));
        let err = StationGraph::from_matrix(vec![station(0, 0.5)], vec![], vec![]).unwrap_err();
        assert!(matches!(err, Error::MatrixShape { .. }));
        let g = two_station(0.5, 0.5);
        let bad = AgentSpec::new(0, 0.0, g.origin_node(0), 0.0, 10.0, 1.0);
        assert!(Instance::new(g.clone(), vec![bad], 0.0).is_err());
        assert!(Instance::new(g, vec![], -1.0).is_err());
    }

    #[test]
    fn agents_sorted_by_departure_then_id() {
        let g = two_station(0.5, 0.5);
        let s = g.origin_node(0);
        let inst = Instance::new(
            g,
            vec![
                agent(3, 1.0, s, 5.0, 1.0),
                agent(2, 1.0, s, 5.0, 1.0),
                agent(1, 2.0, s, 5.0, 1.0),
                agent(4, 0.0, s, 5.0, 1.0),
            ],
            0.0,
        )
        .unwrap();
        let ids: Vec<usize> = inst.agents.iter().map(|a| a.id).collect();
        assert_eq!(ids, vec![4, 2, 3, 1]);
    }

    #[test]
    fn budget_excludes_all_stations() {
        // agent at A with 1 min left, A -> B = 2
        let g = matrix_graph(vec![station(0, 0.5), station(1, 0.5)], 1, |a, b| match (a, b) {
            (0, 1) => 2.0,
            (0, 2) => 4.0,
            _ => 9.0,
        });
        let inst = single_agent(g, 5.0, 10.0, 0.0);
        let mut state = SystemState::initial(&inst);
        state.agents[0] = Some(AgentState {
            node: NodeId(0),
            arrival: 4.0,
            status: AgentStatus::Deciding,
        });
        state.active.insert(0);
        state.observed.insert(StationId(0), 4.0);
        assert!(reachable_actions(&state, 0, &inst).is_empty());
    }

    #[test]
    fn unvisited_station_within_budget_is_reachable() {
        let inst = single_agent(two_station(0.5, 0.5), 5.0, 10.0, 0.0);
        let mut state = SystemState::initial(&inst);
        state.agents[0] = Some(AgentState {
            node: NodeId(0),
            arrival: 1.0,
            status: AgentStatus::Deciding,
        });
        state.active.insert(0);
        state.observed.insert(StationId(0), 1.0);
        assert_eq!(reachable_actions(&state, 0, &inst), vec![StationId(1)]);
    }

    #[test]
    fn observed_station_excluded_without_recovery_and_readmitted_with_it() {
        let inst = single_agent(two_station(0.5, 0.5), 50.0, 10.0, 0.0);
        let mut state = SystemState::initial(&inst).depart(&inst, 0).unwrap();
        state.observed.insert(StationId(1), 0.0);
        assert_eq!(reachable_actions(&state, 0, &inst), vec![StationId(0)]);
        assert_eq!(
            state.decide(&inst, 0, Some(StationId(1))).unwrap_err(),
            Error::ObservedStation(StationId(1))
        );

        let inst = inst.with_recovery(Recovery {
            enabled: true,
            t_thres: 2.0,
        });
        let mut later = state.clone();
        later.agents[0].as_mut().unwrap().arrival = 1.0;
        assert_eq!(reachable_actions(&later, 0, &inst), vec![StationId(0)]);
        later.agents[0].as_mut().unwrap().arrival = 3.0;
        assert_eq!(reachable_actions(&later, 0, &inst), vec![StationId(0), StationId(1)]);
    }

    #[test]
    fn transition_branches() {
        let inst = single_agent(two_station(0.5, 0.5), 5.0, 10.0, 700.0);
        let s0 = SystemState::initial(&inst);
        // request + drive to A
        let (s1, c1) = apply_transition(&s0, &inst, 0, Some(StationId(0)), None).unwrap();
        assert_eq!(c1, 1.0);
        assert_eq!(s1.agent(0).unwrap().status, AgentStatus::EnRoute);
        // A available, gamma = 0
        let (found, c) = apply_transition(&s1, &inst, 0, None, Some(true)).unwrap();
        assert_eq!(c, 0.0);
        assert!(found.terminated.contains(&0) && found.active.is_empty());
        assert_eq!(found.agent(0).unwrap().status, AgentStatus::Found);
        assert!(found.is_observed(StationId(0)));
        // A occupied, drive on to B (travel 1)
        let (s2, c2) = apply_transition(&s1, &inst, 0, Some(StationId(1)), Some(false)).unwrap();
        assert_eq!(c2, 1.0);
        assert_eq!(s2.agent(0).unwrap().status, AgentStatus::EnRoute);
        assert_eq!(s2.agent(0).unwrap().arrival, 2.0);
        // B occupied, nothing left: penalty plus global penalty, once
        let (end, c3) = apply_transition(&s2, &inst, 0, None, Some(false)).unwrap();
        assert_eq!(c3, 10.0 + 700.0);
        assert!(end.is_terminal());
        assert_eq!(
            apply_transition(&end, &inst, 0, None, None).unwrap_err(),
            Error::AbsorbingStatus(0)
        );
    }

    #[test]
    fn global_penalty_charged_on_last_termination_only() {
        let g = two_station(0.5, 0.5);
        let s = g.origin_node(0);
        let inst = Instance::new(g, vec![agent(0, 0.0, s, 5.0, 10.0), agent(1, 0.0, s, 5.0, 10.0)], 700.0).unwrap();
        let st = SystemState::initial(&inst);
        let (st, c) = apply_transition(&st, &inst, 0, None, None).unwrap();
        assert_eq!(c, 10.0);
        let (st, c) = apply_transition(&st, &inst, 1, Some(StationId(0)), None).unwrap();
        assert_eq!(c, 1.0);
        let (st, c) = apply_transition(&st, &inst, 1, None, Some(true)).unwrap();
        assert_eq!(c, 700.0);
        assert!(st.is_terminal());
    }

    #[test]
    fn next_event_orders_by_time_then_agent() {
        let g = two_station(0.5, 0.5);
        let s = g.origin_node(0);
        let inst = Instance::new(g, vec![agent(0, 0.0, s, 5.0, 10.0), agent(1, 1.0, s, 5.0, 10.0)], 0.0).unwrap();
        let st = SystemState::initial(&inst);
        assert_eq!(st.next_event(&inst, true), Some(Event::Depart { agent: 0, time: 0.0 }));
        let (st, _) = apply_transition(&st, &inst, 0, Some(StationId(0)), None).unwrap();
        // agent 0 arrives at 1.0, agent 1 departs at 1.0: agent 0 first
        assert_eq!(
            st.next_event(&inst, true),
            Some(Event::Arrive {
                agent: 0,
                station: StationId(0),
                time: 1.0
            })
        );
        assert_eq!(
            st.next_event(&inst, false),
            Some(Event::Arrive {
                agent: 0,
                station: StationId(0),
                time: 1.0
            })
        );
    }
}
