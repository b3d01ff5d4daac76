#![allow(dead_code)]

use mscps_core::rng::{rng_from_seed, uniform, SimRng};
use mscps_core::{AgentSpec, Instance, Station, StationGraph};

pub fn rand_range(r: &mut SimRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * uniform(r)
}

/// Random metric instance on a 1 km square; travel at 18 km/h (300 m/min).
/// Budgets are large enough that most sequences are feasible.
pub fn tiny_instance(seed: u64, stations: usize, agents: usize, beta_g: f64) -> Instance {
    let mut r = rng_from_seed(seed);
    let st: Vec<Station> = (0..stations)
        .map(|i| Station {
            id: i as u32,
            x: rand_range(&mut r, 0.0, 1000.0),
            y: rand_range(&mut r, 0.0, 1000.0),
            p: match (uniform(&mut r) * 6.0) as u32 {
                0 => 1.0,
                1 => 0.0,
                _ => rand_range(&mut r, 0.05, 0.95),
            },
            mu: rand_range(&mut r, 0.01, 0.2),
        })
        .collect();
    let origins: Vec<(f64, f64)> = (0..agents)
        .map(|_| (rand_range(&mut r, 0.0, 1000.0), rand_range(&mut r, 0.0, 1000.0)))
        .collect();
    let graph = StationGraph::from_coordinates(st, origins, 18.0).unwrap();
    let specs: Vec<AgentSpec> = (0..agents)
        .map(|i| {
            let start = graph.origin_node(i);
            let t0 = (uniform(&mut r) * 4.0).floor() * 0.5;
            let gamma = (0..stations).map(|_| rand_range(&mut r, 0.0, 3.0)).collect();
            AgentSpec::new(
                i,
                t0,
                start,
                rand_range(&mut r, 4.0, 12.0),
                2000.0,
                rand_range(&mut r, 5.0, 60.0),
            )
            .with_usage_cost(gamma)
        })
        .collect();
    Instance::new(graph, specs, beta_g).unwrap()
}

/// Random visit order of a random subset of the stations feasible for
/// `agent` (greedy prefix cut at the first infeasible step).
pub fn random_sequence(r: &mut SimRng, inst: &Instance, agent: usize) -> Vec<mscps_core::StationId> {
    let spec = &inst.agents[agent];
    let mut pool: Vec<_> = inst.graph.station_ids().collect();
    let mut seq = Vec::new();
    let mut at = spec.start;
    let mut elapsed = 0.0;
    let len = (uniform(r) * (pool.len() as f64 + 1.0)) as usize;
    while seq.len() < len && !pool.is_empty() {
        let k = (uniform(r) * pool.len() as f64) as usize;
        let s = pool.swap_remove(k);
        let e = elapsed + inst.graph.travel(at, s.node());
        if !spec.fits_budget(e) || !inst.within_radius(agent, s) {
            continue;
        }
        elapsed = e;
        at = s.node();
        seq.push(s);
    }
    seq
}
