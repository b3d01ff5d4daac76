//! Seeded Monte-Carlo evaluation of the settings on sampled station
//! availabilities.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::benchmarks::{greedy_decide, offline_assignment};
use crate::error::{Error, Result};
use crate::label::LabelOptions;
use crate::model::{Instance, Minutes, NodeId, SearchPolicy, StationId, SystemState};
use crate::planners::{
    dec_o_d_decide, lhro_decide, plan_request, rollout_decide, PlanOptions, RolloutConfig, SharedBoard, StaticSetting,
};
use crate::probability::{ConflictRule, PeerKnowledge};
use crate::rng;

/// Information-sharing and decision-making setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Setting {
    /// Naive drivers deciding greedily with their own observations only.
    Greedy,
    Dec,
    DecO,
    DecI {
        collaborative: bool,
    },
    DecIo {
        collaborative: bool,
    },
    DecOd,
    CenRo,
    CenLhro,
    /// Perfect-information assignment benchmark.
    Off,
}

impl Setting {
    pub const ALL: [Setting; 11] = [
        Setting::Greedy,
        Setting::Dec,
        Setting::DecO,
        Setting::DecI { collaborative: false },
        Setting::DecI { collaborative: true },
        Setting::DecIo { collaborative: false },
        Setting::DecIo { collaborative: true },
        Setting::DecOd,
        Setting::CenRo,
        Setting::CenLhro,
        Setting::Off,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Setting::Greedy => "DEC-N",
            Setting::Dec => "DEC",
            Setting::DecO => "DEC-O",
            Setting::DecI { collaborative: false } => "DEC-I",
            Setting::DecI { collaborative: true } => "DEC-I-c",
            Setting::DecIo { collaborative: false } => "DEC-IO",
            Setting::DecIo { collaborative: true } => "DEC-IO-c",
            Setting::DecOd => "DEC-O-d",
            Setting::CenRo => "CEN-RO",
            Setting::CenLhro => "CEN-LHRO",
            Setting::Off => "OFF",
        }
    }

    /// Settings whose decisions depend on the global penalty.
    pub fn uses_global_penalty(self) -> bool {
        matches!(
            self,
            Setting::DecI { .. } | Setting::DecIo { .. } | Setting::CenRo | Setting::CenLhro
        )
    }

    fn static_setting(self) -> Option<(StaticSetting, bool)> {
        match self {
            Setting::Dec => Some((StaticSetting::Dec, false)),
            Setting::DecO => Some((StaticSetting::DecO, false)),
            Setting::DecI { collaborative } => Some((StaticSetting::DecI, collaborative)),
            Setting::DecIo { collaborative } => Some((StaticSetting::DecIo, collaborative)),
            _ => None,
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Setting::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownSetting(s.to_string()))
    }
}

/// Where the individual penalty enters the simulated cost estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PenaltyConvention {
    /// `t + (1 - delta) * penalty`, consistent with the analytic cost.
    #[default]
    OnFailure,
    /// `t + delta * penalty`, penalty charged on success.
    OnSuccess,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SimConfig {
    pub label: LabelOptions,
    pub rule: ConflictRule,
    pub peers: PeerKnowledge,
    pub rollout: RolloutConfig,
    pub penalty_convention: PenaltyConvention,
}

impl SimConfig {
    fn plan_options(&self, collaborative: bool) -> PlanOptions {
        PlanOptions {
            label: self.label,
            collaborative,
            rule: self.rule,
            peers: self.peers,
        }
    }
}

/// Sampled availability per (run, station), plus recovery delays when the
/// instance has recovery enabled.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationMatrix {
    runs: usize,
    stations: usize,
    bits: Vec<bool>,
    /// Delay after which an initially occupied station becomes free.
    free_after: Vec<Minutes>,
    /// How long a claimed station stays occupied.
    busy_for: Vec<Minutes>,
    seed: u64,
}

impl RealizationMatrix {
    /// Matrix with given availabilities and no recovery delays.
    pub fn from_bits(stations: usize, rows: &[Vec<bool>]) -> Self {
        let mut bits = Vec::with_capacity(rows.len() * stations);
        for row in rows {
            assert_eq!(row.len(), stations, "row length");
            bits.extend_from_slice(row);
        }
        Self {
            runs: rows.len(),
            stations,
            bits,
            free_after: Vec::new(),
            busy_for: Vec::new(),
            seed: 0,
        }
    }

    pub fn runs(&self) -> usize {
        self.runs
    }

    pub fn stations(&self) -> usize {
        self.stations
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn available(&self, run: usize, s: StationId) -> bool {
        self.bits[run * self.stations + s.0]
    }

    pub fn row(&self, run: usize) -> &[bool] {
        &self.bits[run * self.stations..(run + 1) * self.stations]
    }

    fn free_after(&self, run: usize, s: StationId) -> Minutes {
        self.free_after
            .get(run * self.stations + s.0)
            .copied()
            .unwrap_or(f64::INFINITY)
    }

    fn busy_for(&self, run: usize, s: StationId) -> Minutes {
        self.busy_for
            .get(run * self.stations + s.0)
            .copied()
            .unwrap_or(f64::INFINITY)
    }

    /// FNV-1a hash of the contents, for logging that two settings saw the
    /// same draws.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        eat(self.runs as u64);
        eat(self.stations as u64);
        for &b in &self.bits {
            eat(b as u64);
        }
        for x in self.free_after.iter().chain(&self.busy_for) {
            eat(x.to_bits());
        }
        h
    }
}

/// Draws `runs` availability vectors; station `v` is free with probability
/// `p_v`, independently. Each run has its own stream derived from `seed`.
pub fn sample_realizations(instance: &Instance, runs: usize, seed: u64) -> RealizationMatrix {
    let stations = instance.graph.num_stations();
    let recovery = instance.recovery.enabled;
    let mut bits = Vec::with_capacity(runs * stations);
    let mut free_after = Vec::new();
    let mut busy_for = Vec::new();
    for run in 0..runs {
        let mut r = rng::rng_from_seed(rng::derive_seed(seed, run as u64));
        for st in instance.graph.stations() {
            bits.push(rng::bernoulli(&mut r, st.p));
        }
        if recovery {
            for st in instance.graph.stations() {
                free_after.push(rng::exponential(&mut r, st.mu));
                busy_for.push(rng::exponential(&mut r, st.mu));
            }
        }
    }
    RealizationMatrix {
        runs,
        stations,
        bits,
        free_after,
        busy_for,
        seed,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentOutcome {
    /// Driving time until success or until giving up.
    pub search_time: Minutes,
    pub success: bool,
    pub visited: Vec<StationId>,
    pub final_station: Option<StationId>,
}

/// One simulated run, agents in instance order.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub agents: Vec<AgentOutcome>,
}

impl RunRecord {
    pub fn any_failure(&self) -> bool {
        self.agents.iter().any(|a| !a.success)
    }

    /// Realized travel plus failure penalties, without usage and global
    /// penalty.
    pub fn travel_penalty_cost(&self, instance: &Instance) -> Minutes {
        self.agents
            .iter()
            .zip(&instance.agents)
            .map(|(o, a)| o.search_time + if o.success { 0.0 } else { a.penalty })
            .sum()
    }

    /// Realized cost including usage costs and the global penalty.
    pub fn full_cost(&self, instance: &Instance) -> Minutes {
        let gamma: Minutes = self
            .agents
            .iter()
            .zip(&instance.agents)
            .filter_map(|(o, a)| o.final_station.map(|s| a.gamma(s)))
            .sum();
        let global = if self.any_failure() { instance.beta_global } else { 0.0 };
        self.travel_penalty_cost(instance) + gamma + global
    }
}

/// Runs `setting` on every row of `matrix`.
pub fn simulate(setting: Setting, instance: &Instance, matrix: &RealizationMatrix, cfg: &SimConfig) -> Vec<RunRecord> {
    (0..matrix.runs())
        .map(|run| simulate_run(setting, instance, matrix, run, cfg))
        .collect()
}

/// Runs `setting` on row `run` of `matrix`.
pub fn simulate_run(
    setting: Setting,
    instance: &Instance,
    matrix: &RealizationMatrix,
    run: usize,
    cfg: &SimConfig,
) -> RunRecord {
    if setting == Setting::Off {
        return offline_run(instance, matrix, run);
    }
    let mut sim = Run::new(setting, instance, matrix, run, cfg);
    sim.execute();
    sim.record()
}

fn offline_run(instance: &Instance, matrix: &RealizationMatrix, run: usize) -> RunRecord {
    let agents: Vec<usize> = (0..instance.num_agents()).collect();
    let res = offline_assignment(instance, &agents, matrix.row(run));
    RunRecord {
        agents: res
            .assigned
            .iter()
            .zip(&res.per_agent)
            .map(|(s, &c)| AgentOutcome {
                search_time: if s.is_some() { c } else { 0.0 },
                success: s.is_some(),
                visited: s.iter().copied().collect(),
                final_station: *s,
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Pending,
    EnRoute,
    Done,
}

#[derive(Debug, Clone)]
struct Walker {
    phase: Phase,
    node: NodeId,
    /// Clock at `node`, or arrival time at `target` when en route.
    clock: Minutes,
    target: Option<StationId>,
    plan: Vec<StationId>,
    pos: usize,
    visited: Vec<StationId>,
    success: bool,
    final_station: Option<StationId>,
}

struct Run<'a> {
    setting: Setting,
    instance: &'a Instance,
    matrix: &'a RealizationMatrix,
    run: usize,
    cfg: &'a SimConfig,
    walkers: Vec<Walker>,
    claimed_until: Vec<Minutes>,
    board: SharedBoard,
    central: SystemState,
    pi: BTreeMap<usize, SearchPolicy>,
}

impl<'a> Run<'a> {
    fn new(
        setting: Setting,
        instance: &'a Instance,
        matrix: &'a RealizationMatrix,
        run: usize,
        cfg: &'a SimConfig,
    ) -> Self {
        let walkers = instance
            .agents
            .iter()
            .map(|a| Walker {
                phase: Phase::Pending,
                node: a.start,
                clock: a.t0,
                target: None,
                plan: Vec::new(),
                pos: 0,
                visited: Vec::new(),
                success: false,
                final_station: None,
            })
            .collect();
        Self {
            setting,
            instance,
            matrix,
            run,
            cfg,
            walkers,
            claimed_until: alloc::vec![f64::NEG_INFINITY; instance.graph.num_stations()],
            board: SharedBoard::default(),
            central: SystemState::initial(instance),
            pi: BTreeMap::new(),
        }
    }

    fn is_central(&self) -> bool {
        matches!(self.setting, Setting::CenRo | Setting::CenLhro)
    }

    fn is_free(&self, s: StationId, t: Minutes) -> bool {
        if t < self.claimed_until[s.0] {
            return false;
        }
        let initially = self.matrix.available(self.run, s);
        if !self.instance.recovery.enabled {
            return initially && self.claimed_until[s.0] == f64::NEG_INFINITY;
        }
        initially || t >= self.matrix.free_after(self.run, s)
    }

    fn execute(&mut self) {
        while let Some(i) = self.next_agent() {
            let w = &self.walkers[i];
            match w.phase {
                Phase::Pending => self.request(i),
                Phase::EnRoute => self.arrive(i),
                Phase::Done => unreachable!("done agents have no events"),
            }
        }
    }

    fn next_agent(&self) -> Option<usize> {
        self.walkers
            .iter()
            .enumerate()
            .filter(|(_, w)| w.phase != Phase::Done)
            .map(|(i, w)| (w.clock, i))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .map(|(_, i)| i)
    }

    fn request(&mut self, i: usize) {
        if let Some((kind, collaborative)) = self.setting.static_setting() {
            let opts = self.cfg.plan_options(collaborative);
            let plan = plan_request(self.instance, i, &self.board, kind, &opts);
            self.walkers[i].plan = plan.stations().collect();
            if kind.uses_intentions() {
                self.board.intentions.push(plan);
            }
        }
        if self.is_central() {
            self.central = self
                .central
                .depart(self.instance, i)
                .expect("pending agents can depart");
        }
        self.act(i);
    }

    fn arrive(&mut self, i: usize) {
        let (s, t) = {
            let w = &self.walkers[i];
            (w.target.expect("en-route agents have a target"), w.clock)
        };
        let free = self.is_free(s, t);
        {
            let w = &mut self.walkers[i];
            w.node = s.node();
            w.target = None;
            w.visited.push(s);
        }
        self.board.observations.insert(s, t);
        if self.is_central() {
            self.central = self
                .central
                .observe(self.instance, i, free)
                .expect("en-route agents observe")
                .0;
        }
        if free {
            self.claimed_until[s.0] = t + self.matrix.busy_for(self.run, s);
            let w = &mut self.walkers[i];
            w.success = true;
            w.final_station = Some(s);
            w.phase = Phase::Done;
            self.board.terminated.insert(i);
            self.pi.remove(&i);
        } else {
            self.act(i);
        }
    }

    fn act(&mut self, i: usize) {
        let choice = self.choose(i).filter(|&s| self.feasible(i, s));
        if self.is_central() {
            self.central = self
                .central
                .decide(self.instance, i, choice)
                .expect("central choices are reachable")
                .0;
        }
        let w = &mut self.walkers[i];
        match choice {
            Some(s) => {
                w.clock += self.instance.graph.travel(w.node, s.node());
                w.target = Some(s);
                w.phase = Phase::EnRoute;
            }
            None => {
                w.phase = Phase::Done;
                self.board.terminated.insert(i);
                self.pi.remove(&i);
            }
        }
    }

    fn feasible(&self, i: usize, s: StationId) -> bool {
        let w = &self.walkers[i];
        let spec = &self.instance.agents[i];
        let arrival = w.clock + self.instance.graph.travel(w.node, s.node());
        s.node() != w.node && self.instance.within_radius(i, s) && spec.fits_budget(arrival - spec.t0)
    }

    fn shared_observations(&self, now: Minutes) -> BTreeSet<StationId> {
        let recovery = self.instance.recovery;
        self.board
            .observations
            .iter()
            .filter(|(_, &t)| !recovery.enabled || now - t <= recovery.t_thres)
            .map(|(&s, _)| s)
            .collect()
    }

    fn choose(&mut self, i: usize) -> Option<StationId> {
        let instance = self.instance;
        match self.setting {
            Setting::Greedy => {
                let w = &self.walkers[i];
                let candidates: Vec<StationId> = instance
                    .graph
                    .station_ids()
                    .filter(|s| !w.visited.contains(s) && self.feasible(i, *s))
                    .collect();
                greedy_decide(instance, i, w.node, &candidates, |s| instance.graph.station(s).p)
            }
            Setting::DecOd => {
                let w = &self.walkers[i];
                let mut seen = self.shared_observations(w.clock);
                seen.extend(w.visited.iter().copied());
                dec_o_d_decide(instance, i, w.node, w.clock, &seen, &self.cfg.label)
            }
            Setting::CenRo => rollout_decide(&self.central, instance, i, &self.cfg.rollout),
            Setting::CenLhro => {
                let opts = self.cfg.plan_options(true);
                lhro_decide(&self.central, instance, i, &mut self.pi, &opts)
            }
            Setting::Off => None,
            _ => {
                let w = &mut self.walkers[i];
                let next = w.plan.get(w.pos).copied();
                w.pos += 1;
                next
            }
        }
    }

    fn record(self) -> RunRecord {
        RunRecord {
            agents: self
                .walkers
                .into_iter()
                .zip(&self.instance.agents)
                .map(|(w, a)| AgentOutcome {
                    search_time: w.clock - a.t0,
                    success: w.success,
                    visited: w.visited,
                    final_station: w.final_station,
                })
                .collect(),
        }
    }
}

/// Estimates over a batch of runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub alpha_hat_i: Vec<Minutes>,
    pub rho_hat_i: Vec<f64>,
    /// Mean search time per agent.
    pub t_hat_i: Vec<Minutes>,
    /// `sum alpha_hat_i + (1 - prod rho_hat_i) * beta^G`.
    pub alpha_hat: Minutes,
    /// `prod rho_hat_i`.
    pub rho_hat: f64,
    /// Fraction of runs in which every agent succeeded.
    pub all_success: f64,
    pub t_hat: Minutes,
    /// Mean over runs of the longest search time.
    pub t_max: Minutes,
    /// Mean over runs of the shortest search time.
    pub t_min: Minutes,
    pub rho_min: f64,
    pub rho_max: f64,
}

pub fn compute_metrics(records: &[RunRecord], instance: &Instance, convention: PenaltyConvention) -> Metrics {
    let n = instance.num_agents();
    let runs = records.len().max(1) as f64;
    let mut alpha_hat_i = alloc::vec![0.0; n];
    let mut rho_hat_i = alloc::vec![0.0; n];
    let mut t_hat_i = alloc::vec![0.0; n];
    let (mut t_max, mut t_min, mut all_success) = (0.0, 0.0, 0.0);
    for rec in records {
        for (i, o) in rec.agents.iter().enumerate() {
            let penalized = match convention {
                PenaltyConvention::OnFailure => !o.success,
                PenaltyConvention::OnSuccess => o.success,
            };
            let pen = if penalized { instance.agents[i].penalty } else { 0.0 };
            alpha_hat_i[i] += o.search_time + pen;
            rho_hat_i[i] += if o.success { 1.0 } else { 0.0 };
            t_hat_i[i] += o.search_time;
        }
        let times = rec.agents.iter().map(|o| o.search_time);
        t_max += times.clone().fold(f64::NEG_INFINITY, f64::max).max(0.0);
        t_min += if n == 0 {
            0.0
        } else {
            times.fold(f64::INFINITY, f64::min)
        };
        if !rec.any_failure() {
            all_success += 1.0;
        }
    }
    for i in 0..n {
        alpha_hat_i[i] /= runs;
        rho_hat_i[i] /= runs;
        t_hat_i[i] /= runs;
    }
    let rho_hat: f64 = rho_hat_i.iter().product();
    let alpha_hat = alpha_hat_i.iter().sum::<f64>() + (1.0 - rho_hat) * instance.beta_global;
    Metrics {
        t_hat: if n == 0 {
            0.0
        } else {
            t_hat_i.iter().sum::<f64>() / n as f64
        },
        alpha_hat,
        rho_hat,
        all_success: all_success / runs,
        t_max: t_max / runs,
        t_min: t_min / runs,
        rho_min: rho_hat_i.iter().copied().fold(f64::INFINITY, f64::min),
        rho_max: rho_hat_i.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        alpha_hat_i,
        rho_hat_i,
        t_hat_i,
    }
}

/// Names of all settings, in canonical order.
pub fn setting_names() -> Vec<String> {
    Setting::ALL.iter().map(|s| s.name().to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use alloc::vec;

    fn two_agents() -> Instance {
        let g = two_station(0.5, 0.5);
        let s = g.origin_node(0);
        Instance::new(g, vec![agent(0, 0.0, s, 5.0, 10.0), agent(1, 0.0, s, 5.0, 10.0)], 700.0).unwrap()
    }

    #[test]
    fn setting_names_round_trip() {
        for s in Setting::ALL {
            assert_eq!(s.name().parse::<Setting>().unwrap(), s);
        }
        assert!("DEC-X".parse::<Setting>().is_err());
    }

    #[test]
    fn realization_columns_and_determinism() {
        let g = matrix_graph(vec![station(0, 0.0), station(1, 1.0), station(2, 0.25)], 1, |_, _| 1.0);
        let inst = single_agent(g, 5.0, 10.0, 0.0);
        let m = sample_realizations(&inst, 10_000, 42);
        assert!((0..m.runs()).all(|r| !m.available(r, StationId(0)) && m.available(r, StationId(1))));
        let mean = (0..m.runs()).filter(|&r| m.available(r, StationId(2))).count() as f64 / 10_000.0;
        assert!((mean - 0.25).abs() <= 3.0 * libm::sqrt(0.25 * 0.75 / 10_000.0));
        assert_eq!(m, sample_realizations(&inst, 10_000, 42));
        assert_ne!(m.fingerprint(), sample_realizations(&inst, 10_000, 43).fingerprint());
    }

    #[test]
    fn everything_free_or_everything_taken() {
        let inst = two_agents();
        let free = RealizationMatrix::from_bits(2, &[vec![true, true]]);
        let busy = RealizationMatrix::from_bits(2, &[vec![false, false]]);
        let cfg = SimConfig::default();
        for s in Setting::ALL {
            let rec = simulate_run(s, &inst, &free, 0, &cfg);
            assert!(rec.agents.iter().all(|a| a.success), "{s}");
            let rec = simulate_run(s, &inst, &busy, 0, &cfg);
            assert!(rec.any_failure(), "{s}");
            assert!(rec.agents.iter().all(|a| !a.success), "{s}");
        }
    }

    #[test]
    fn one_free_station_serves_one_agent() {
        let inst = two_agents();
        let m = RealizationMatrix::from_bits(2, &[vec![true, false]]);
        for s in Setting::ALL {
            let rec = simulate_run(s, &inst, &m, 0, &SimConfig::default());
            assert_eq!(rec.agents.iter().filter(|a| a.success).count(), 1, "{s}");
            let claimed: Vec<_> = rec.agents.iter().filter_map(|a| a.final_station).collect();
            assert_eq!(claimed, vec![StationId(0)]);
        }
        // DEC: both drive to A at the same time; the lower index claims it
        let rec = simulate_run(Setting::Dec, &inst, &m, 0, &SimConfig::default());
        assert!(rec.agents[0].success);
    }

    #[test]
    fn metrics_example() {
        let inst = single_agent(two_station(0.5, 0.5), 5.0, 10.0, 0.0);
        let mk = |t, ok| RunRecord {
            agents: vec![AgentOutcome {
                search_time: t,
                success: ok,
                visited: vec![],
                final_station: None,
            }],
        };
        let recs = [mk(2.0, true), mk(3.0, false)];
        let m = compute_metrics(&recs, &inst, PenaltyConvention::OnFailure);
        assert_eq!(m.alpha_hat_i, vec![7.5]);
        assert_eq!(m.rho_hat_i, vec![0.5]);
        let on_success = compute_metrics(&recs, &inst, PenaltyConvention::OnSuccess);
        assert_eq!(on_success.alpha_hat_i, vec![(2.0 + 10.0 + 3.0) / 2.0]);
        let all = compute_metrics(&[mk(2.0, true), mk(4.0, true)], &inst, PenaltyConvention::OnFailure);
        assert_eq!(all.alpha_hat_i, vec![3.0]);
    }

    #[test]
    fn failure_time_is_driving_time() {
        let inst = single_agent(two_station(0.5, 0.5), 5.0, 10.0, 0.0);
        let m = RealizationMatrix::from_bits(2, &[vec![false, false]]);
        let rec = simulate_run(Setting::Dec, &inst, &m, 0, &SimConfig::default());
        // plan (A, B): 1 + 1
        assert_eq!(rec.agents[0].search_time, 2.0);
        assert_eq!(rec.agents[0].visited, vec![StationId(0), StationId(1)]);
    }
}
