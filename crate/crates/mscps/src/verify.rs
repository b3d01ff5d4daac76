//! Oracle suite: closed forms and heuristics checked against exhaustive
//! evaluation on tiny instances, plus the simulator against analytic values.

use std::fmt;
use std::time::Instant;

use mscps_core::benchmarks::greedy_decide;
use mscps_core::label::{lh_search, LabelOptions, SearchOrigin};
use mscps_core::model::{action_probability, apply_transition, reachable_actions, Event};
use mscps_core::oracle::{exact_policy_set_value, exact_single_optimum, gamma_transformed, is_user_independent};
use mscps_core::planners::{central_actions, plan_request, rollout_decide, PlanOptions, SharedBoard, StaticSetting};
use mscps_core::probability::{build_policy, system_cost, AvailabilityContext, ConflictRule};
use mscps_core::rng::{bernoulli, derive_seed, rng_from_seed, uniform, SimRng};
use mscps_core::simulation::{sample_realizations, simulate, simulate_run};
use mscps_core::stats::{mean, std_error};
use mscps_core::{
    AgentSpec, Instance, SearchPolicy, Setting, SimConfig, Station, StationGraph, StationId, SystemState,
};

use crate::generate::{generate, GenParams};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

fn range(r: &mut SimRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * uniform(r)
}

/// Random metric instance on a 1 km square at 18 km/h. About a third of the
/// stations have `p` in {0, 1}. Usage costs up to 3 minutes when
/// `usage_costs` is set.
pub fn tiny_instance(seed: u64, stations: usize, agents: usize, beta_global: f64, usage_costs: bool) -> Instance {
    let mut r = rng_from_seed(seed);
    let st: Vec<Station> = (0..stations)
        .map(|i| Station {
            id: i as u32,
            x: range(&mut r, 0.0, 1000.0),
            y: range(&mut r, 0.0, 1000.0),
            p: match (uniform(&mut r) * 6.0) as u32 {
                0 => 1.0,
                1 => 0.0,
                _ => range(&mut r, 0.05, 0.95),
            },
            mu: range(&mut r, 0.01, 0.2),
        })
        .collect();
    let origins: Vec<(f64, f64)> = (0..agents)
        .map(|_| (range(&mut r, 0.0, 1000.0), range(&mut r, 0.0, 1000.0)))
        .collect();
    let graph = StationGraph::from_coordinates(st, origins, 18.0).expect("valid tiny graph");
    let specs = (0..agents)
        .map(|i| {
            let t0 = (uniform(&mut r) * 4.0).floor() * 0.5;
            let gamma: Vec<f64> = (0..stations).map(|_| range(&mut r, 0.0, 3.0)).collect();
            let spec = AgentSpec::new(
                i,
                t0,
                graph.origin_node(i),
                range(&mut r, 4.0, 12.0),
                2000.0,
                range(&mut r, 5.0, 60.0),
            );
            if usage_costs {
                spec.with_usage_cost(gamma)
            } else {
                spec
            }
        })
        .collect();
    Instance::new(graph, specs, beta_global).expect("valid tiny instance")
}

/// Random order of a random subset of stations, each step kept only if it
/// fits the agent's radius and budget.
pub fn random_sequence(r: &mut SimRng, inst: &Instance, agent: usize) -> Vec<StationId> {
    let spec = inst.agent(agent);
    let mut pool: Vec<StationId> = inst.graph.station_ids().collect();
    let len = (uniform(r) * (pool.len() as f64 + 1.0)) as usize;
    let (mut seq, mut at, mut elapsed) = (Vec::new(), spec.start, 0.0);
    while seq.len() < len && !pool.is_empty() {
        let s = pool.swap_remove((uniform(r) * pool.len() as f64) as usize);
        let e = elapsed + inst.graph.travel(at, s.node());
        if spec.fits_budget(e) && inst.within_radius(agent, s) {
            elapsed = e;
            at = s.node();
            seq.push(s);
        }
    }
    seq
}

/// Policies built in agent order, each evaluated against its predecessors.
pub fn sequential_policies(inst: &Instance, seqs: &[Vec<StationId>]) -> Vec<SearchPolicy> {
    let base = inst.graph.base_probabilities();
    let mut out: Vec<SearchPolicy> = Vec::new();
    for (i, seq) in seqs.iter().enumerate() {
        let ctx = AvailabilityContext::from_policies(base.clone(), &out, ConflictRule::Inclusive);
        out.push(build_policy(inst, i, seq, &ctx).expect("feasible random sequence"));
    }
    out
}

/// Closed-form system cost equals the exhaustive value on `cases` random
/// user-independent policy sets (at most 3 agents and 5 stations).
pub fn check_independent_sets(cases: usize, seed: u64) -> CheckResult {
    let start = Instant::now();
    let (mut done, mut worst, mut overlapping) = (0, 0.0f64, 0);
    let mut k = 0u64;
    while done < cases && k < 1000 * cases as u64 {
        let s = derive_seed(seed, k);
        k += 1;
        let mut r = rng_from_seed(s);
        let agents = 1 + (uniform(&mut r) * 3.0) as usize;
        let stations = 1 + (uniform(&mut r) * 5.0) as usize;
        let inst = tiny_instance(s, stations, agents, 700.0, true);
        let seqs: Vec<_> = (0..agents).map(|i| random_sequence(&mut r, &inst, i)).collect();
        let pols = sequential_policies(&inst, &seqs);
        if !is_user_independent(&pols, &inst).unwrap_or(false) {
            continue;
        }
        overlapping +=
            seqs.iter()
                .enumerate()
                .any(|(i, a)| seqs[i + 1..].iter().any(|b| a.iter().any(|x| b.contains(x)))) as usize;
        let exact = exact_policy_set_value(&pols, &inst).expect("tiny instance");
        worst = worst.max((exact - system_cost(&pols, inst.beta_global)).abs());
        done += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    CheckResult {
        name: "independent policy sets",
        passed: done == cases && worst <= 1e-9 && secs < 30.0,
        detail: format!("{done} sets ({overlapping} sharing a station), max |diff| {worst:.2e}, {secs:.2} s"),
    }
}

/// Usage costs folded into travel times leave the cost of a fixed sequence
/// unchanged.
pub fn check_gamma_transform(cases: usize, seed: u64) -> CheckResult {
    let mut worst = 0.0f64;
    for k in 0..cases as u64 {
        let s = derive_seed(seed, k);
        let mut r = rng_from_seed(s);
        let inst = tiny_instance(s, 1 + (uniform(&mut r) * 7.0) as usize, 1, 0.0, true);
        let seq = random_sequence(&mut r, &inst, 0);
        let ctx = AvailabilityContext::independent(inst.graph.base_probabilities());
        let direct = build_policy(&inst, 0, &seq, &ctx).expect("feasible sequence");
        let moved_inst = gamma_transformed(&inst, 0).expect("single agent");
        let moved = build_policy(&moved_inst, 0, &seq, &ctx).expect("unbounded budget");
        let rel = (direct.cost.alpha - moved.cost.alpha).abs() / direct.cost.alpha.abs().max(f64::MIN_POSITIVE);
        worst = worst.max(if direct.cost.alpha == moved.cost.alpha {
            0.0
        } else {
            rel
        });
    }
    CheckResult {
        name: "usage-cost transformation",
        passed: worst <= 1e-12,
        detail: format!("{cases} policies, max relative diff {worst:.2e}"),
    }
}

/// LH best policy against the exhaustive single-agent optimum.
pub fn check_label_quality(cases: usize, seed: u64) -> CheckResult {
    let (mut below, mut gaps) = (0, Vec::with_capacity(cases));
    for k in 0..cases as u64 {
        let s = derive_seed(seed, k);
        let mut r = rng_from_seed(s);
        let inst = tiny_instance(s, 1 + (uniform(&mut r) * 8.0) as usize, 1, 0.0, true);
        let opt = exact_single_optimum(&inst, 0).expect("at most 8 stations");
        let ctx = AvailabilityContext::independent(inst.graph.base_probabilities());
        let best = &lh_search(&inst, 0, &ctx, &SearchOrigin::start(&inst, 0), &LabelOptions::default())[0];
        if best.cost.alpha < opt.cost.alpha - 1e-9 {
            below += 1;
        }
        let gap = if opt.cost.alpha > 0.0 {
            (best.cost.alpha - opt.cost.alpha) / opt.cost.alpha
        } else {
            0.0
        };
        gaps.push(gap);
    }
    let m = mean(&gaps);
    let max = gaps.iter().copied().fold(0.0, f64::max);
    CheckResult {
        name: "label search quality",
        passed: below == 0 && m <= 0.05,
        detail: format!(
            "{cases} instances, {below} below optimum, mean gap {:.3}%, max gap {:.3}%",
            100.0 * m,
            100.0 * max
        ),
    }
}

/// A planned single-agent policy simulated `runs` times: sample means of the
/// cost and of success within 3 standard errors of the analytic values.
pub fn check_monte_carlo(runs: usize, seed: u64) -> CheckResult {
    let opts = PlanOptions::default();
    let mut k = 0u64;
    let (inst, plan) = loop {
        let inst = tiny_instance(derive_seed(seed, k), 6, 1, 700.0, false);
        k += 1;
        let plan = plan_request(&inst, 0, &SharedBoard::default(), StaticSetting::Dec, &opts);
        if plan.len() >= 2 && plan.cost.rho > 0.05 && plan.cost.rho < 0.95 {
            break (inst, plan);
        }
    };
    let matrix = sample_realizations(&inst, runs, seed);
    let records = simulate(Setting::Dec, &inst, &matrix, &SimConfig::default());
    let penalty = inst.agent(0).penalty;
    let alpha: Vec<f64> = records
        .iter()
        .map(|r| r.agents[0].search_time + if r.agents[0].success { 0.0 } else { penalty })
        .collect();
    let rho: Vec<f64> = records
        .iter()
        .map(|r| f64::from(u8::from(r.agents[0].success)))
        .collect();
    let (a_hat, a_se) = (mean(&alpha), std_error(&alpha));
    let (r_hat, r_se) = (mean(&rho), std_error(&rho));
    let a_ok = (a_hat - plan.cost.alpha).abs() <= 3.0 * a_se;
    let r_ok = (r_hat - plan.cost.rho).abs() <= 3.0 * r_se;
    CheckResult {
        name: "simulated vs analytic cost",
        passed: a_ok && r_ok,
        detail: format!(
            "{runs} runs, {} visits: alpha {a_hat:.4} vs {:.4} (se {a_se:.4}), rho {r_hat:.4} vs {:.4} (se {r_se:.4})",
            plan.len(),
            plan.cost.alpha,
            plan.cost.rho
        ),
    }
}

/// Per run, the perfect-information assignment costs no more than any online
/// setting's travel plus penalties.
pub fn check_offline_bound(instances: usize, runs: usize, seed: u64) -> CheckResult {
    let params = GenParams {
        agents: 3,
        start_radius: 300.0,
        search_radius: 1000.0,
        ..GenParams::default()
    };
    let cfg = SimConfig::default();
    let (mut violations, mut compared) = (0, 0);
    for k in 0..instances as u64 {
        let inst = generate(&params, derive_seed(seed, 2 * k)).expect("generator parameters are valid");
        let matrix = sample_realizations(&inst, runs, derive_seed(seed, 2 * k + 1));
        for run in 0..runs {
            let off = simulate_run(Setting::Off, &inst, &matrix, run, &cfg).travel_penalty_cost(&inst);
            for s in Setting::ALL.into_iter().filter(|&s| s != Setting::Off) {
                let c = simulate_run(s, &inst, &matrix, run, &cfg).travel_penalty_cost(&inst);
                compared += 1;
                if off > c + 1e-9 {
                    violations += 1;
                }
            }
        }
    }
    CheckResult {
        name: "offline lower bound",
        passed: violations == 0,
        detail: format!("{instances} instances x {runs} runs, {compared} comparisons, {violations} violations"),
    }
}

/// Walks a random trajectory and returns a state in which some agent has to
/// decide, together with that agent.
fn random_deciding_state(inst: &Instance, r: &mut SimRng) -> Option<(SystemState, usize)> {
    let steps = (uniform(r) * 6.0) as usize;
    let mut st = SystemState::initial(inst);
    for _ in 0..steps {
        let (agent, obs) = match st.next_event(inst, true)? {
            Event::Depart { agent, .. } => (agent, None),
            Event::Arrive { agent, station, .. } => (agent, Some(bernoulli(r, inst.graph.station(station).p))),
        };
        let action = if obs == Some(true) {
            None
        } else {
            let mut pre = st.clone();
            if obs.is_none() {
                pre = pre.depart(inst, agent).ok()?;
            } else {
                pre = pre.observe(inst, agent, false).ok()?.0;
            }
            let acts = reachable_actions(&pre, agent, inst);
            if acts.is_empty() || uniform(r) < 0.1 {
                None
            } else {
                Some(acts[(uniform(r) * acts.len() as f64) as usize])
            }
        };
        st = apply_transition(&st, inst, agent, action, obs).ok()?.0;
        if st.is_terminal() {
            return None;
        }
    }
    match st.next_event(inst, true)? {
        Event::Depart { agent, .. } => Some((st.depart(inst, agent).ok()?, agent)),
        Event::Arrive { agent, .. } => Some((st.observe(inst, agent, false).ok()?.0, agent)),
    }
}

/// With no lookahead the rollout choice coincides with the greedy rule on
/// the same action set and probabilities.
pub fn check_zero_horizon(states: usize, seed: u64) -> CheckResult {
    let cfg = mscps_core::planners::RolloutConfig { horizon: 0 };
    let (mut done, mut mismatches, mut k) = (0, 0, 0u64);
    while done < states && k < 100 * states as u64 {
        let s = derive_seed(seed, k);
        k += 1;
        let mut r = rng_from_seed(s);
        let agents = 1 + (uniform(&mut r) * 3.0) as usize;
        let inst = tiny_instance(s, 2 + (uniform(&mut r) * 5.0) as usize, agents, 700.0, false);
        let Some((st, agent)) = random_deciding_state(&inst, &mut r) else {
            continue;
        };
        let node = st.agent(agent).expect("deciding agent has a state").node;
        let actions = central_actions(&st, &inst, agent);
        let g = greedy_decide(&inst, agent, node, &actions, |v| {
            action_probability(&st, &inst, v, st.clock)
        });
        if rollout_decide(&st, &inst, agent, &cfg) != g {
            mismatches += 1;
        }
        done += 1;
    }
    CheckResult {
        name: "zero-lookahead rollout equals greedy",
        passed: done == states && mismatches == 0,
        detail: format!("{done} states, {mismatches} mismatches"),
    }
}

/// Every oracle check with its default size.
pub fn run_all(seed: u64) -> Vec<CheckResult> {
    vec![
        check_independent_sets(200, seed),
        check_gamma_transform(500, seed),
        check_label_quality(100, seed),
        check_monte_carlo(10_000, seed),
        check_offline_bound(20, 100, seed),
        check_zero_horizon(1000, seed),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_checks_pass() {
        for c in [
            check_independent_sets(20, 1),
            check_gamma_transform(50, 1),
            check_label_quality(20, 1),
            check_zero_horizon(50, 1),
        ] {
            assert!(c.passed, "{c}");
        }
    }

    #[test]
    fn display_tags() {
        let c = CheckResult {
            name: "x",
            passed: false,
            detail: "y".into(),
        };
        assert_eq!(c.to_string(), "[FAIL] x: y");
    }

    #[test]
    fn deciding_states_have_a_deciding_agent() {
        let inst = tiny_instance(4, 4, 2, 700.0, false);
        let mut r = rng_from_seed(9);
        let mut found = 0;
        for _ in 0..50 {
            if let Some((st, a)) = random_deciding_state(&inst, &mut r) {
                assert_eq!(st.deciding_agent(), Some(a));
                found += 1;
            }
        }
        assert!(found > 0);
    }
}
