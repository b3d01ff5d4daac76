//! Synthetic instances on a disc around a common center.

use std::f64::consts::PI;

use mscps_core::rng::{derive_seed, rng_from_seed, uniform, SimRng};
use mscps_core::{AgentSpec, Instance, Minutes, NodeId, Recovery, Station, StationGraph};
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

/// Regeneration attempts before giving up on a parameter set.
pub const MAX_ATTEMPTS: u64 = 100;

/// Concentration `a + b` of the Beta law drawing station probabilities.
pub const BETA_CONCENTRATION: f64 = 10.0;

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("invalid generator parameter: {0}")]
    Param(&'static str),
    #[error("no instance with a reachable station for every agent after {0} attempts")]
    Unreachable(u64),
    #[error(transparent)]
    Model(#[from] mscps_core::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenParams {
    /// Number of drivers.
    pub agents: usize,
    /// Radius around the center in which starts are drawn, meters.
    pub start_radius: f64,
    /// Driver search radius, meters.
    pub search_radius: f64,
    /// Departures are spread evenly over `[0, start_horizon]` minutes.
    pub start_horizon: Minutes,
    /// Mean station availability.
    pub mean_availability: f64,
    /// Stations per square kilometer.
    pub station_density: f64,
    pub budget: Minutes,
    pub penalty: Minutes,
    pub beta_global: Minutes,
    pub speed_kmh: f64,
    /// Mean time a station stays occupied, minutes.
    pub mean_occupied: Minutes,
    /// Recovery threshold; `None` disables recovery.
    pub recovery_threshold: Option<Minutes>,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            agents: 5,
            start_radius: 300.0,
            search_radius: 2000.0,
            start_horizon: 0.0,
            mean_availability: 0.25,
            station_density: 2.5,
            budget: mscps_core::DEFAULT_BUDGET,
            penalty: mscps_core::DEFAULT_PENALTY,
            beta_global: mscps_core::DEFAULT_BETA_GLOBAL,
            speed_kmh: mscps_core::DEFAULT_SPEED_KMH,
            mean_occupied: 60.0,
            recovery_threshold: None,
        }
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<(), GenError> {
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if self.agents == 0 {
            return Err(GenError::Param("agents must be >= 1"));
        }
        if !positive(self.start_radius) || !positive(self.search_radius) {
            return Err(GenError::Param("radii must be > 0"));
        }
        if !(self.start_horizon >= 0.0 && self.start_horizon.is_finite()) {
            return Err(GenError::Param("start horizon must be >= 0"));
        }
        if !(self.mean_availability > 0.0 && self.mean_availability < 1.0) {
            return Err(GenError::Param("mean availability must be in (0, 1)"));
        }
        if !positive(self.station_density) || !positive(self.budget) || !positive(self.speed_kmh) {
            return Err(GenError::Param("density, budget and speed must be > 0"));
        }
        if !positive(self.mean_occupied) {
            return Err(GenError::Param("mean occupied time must be > 0"));
        }
        if !(self.penalty >= 0.0 && self.beta_global >= 0.0) {
            return Err(GenError::Param("penalties must be >= 0"));
        }
        Ok(())
    }

    /// Departure times `k * t_s / (N - 1)`.
    pub fn departure_times(&self) -> Vec<Minutes> {
        let n = self.agents;
        if n <= 1 {
            return vec![0.0; n];
        }
        (0..n).map(|k| self.start_horizon * k as f64 / (n - 1) as f64).collect()
    }
}

fn point_in_disc(rng: &mut SimRng, radius: f64) -> (f64, f64) {
    let r = radius * uniform(rng).sqrt();
    let theta = 2.0 * PI * uniform(rng);
    (r * theta.cos(), r * theta.sin())
}

/// Draws one instance. Stations are placed in the disc of radius
/// `search_radius + start_radius`; only those inside some driver's search
/// radius are kept.
pub fn generate(params: &GenParams, seed: u64) -> Result<Instance, GenError> {
    params.validate()?;
    for attempt in 0..MAX_ATTEMPTS {
        let inst = draw(params, derive_seed(seed, attempt))?;
        let ok = (0..inst.num_agents()).all(|i| {
            let a = inst.agent(i);
            inst.graph
                .station_ids()
                .any(|s| inst.within_radius(i, s) && inst.graph.travel(a.start, s.node()) <= a.budget)
        });
        if ok {
            return Ok(inst);
        }
        log::debug!("attempt {attempt}: some agent has no reachable station, redrawing");
    }
    Err(GenError::Unreachable(MAX_ATTEMPTS))
}

fn draw(params: &GenParams, seed: u64) -> Result<Instance, GenError> {
    let mut rng = rng_from_seed(seed);
    let a = BETA_CONCENTRATION * params.mean_availability;
    let beta = Beta::new(a, BETA_CONCENTRATION - a).map_err(|_| GenError::Param("beta law"))?;

    let starts: Vec<(f64, f64)> = (0..params.agents)
        .map(|_| point_in_disc(&mut rng, params.start_radius))
        .collect();

    let outer = params.search_radius + params.start_radius;
    let expected = params.station_density * PI * (outer / 1000.0).powi(2);
    let count = expected.round() as usize;
    let mut stations = Vec::new();
    for _ in 0..count {
        let (x, y) = point_in_disc(&mut rng, outer);
        let p: f64 = beta.sample(&mut rng);
        let covered = starts
            .iter()
            .any(|&(sx, sy)| (x - sx).hypot(y - sy) <= params.search_radius);
        if covered {
            stations.push(Station {
                id: stations.len() as u32,
                x,
                y,
                p,
                mu: 1.0 / params.mean_occupied,
            });
        }
    }

    let n = stations.len();
    let graph = StationGraph::from_coordinates(stations, starts, params.speed_kmh)?;
    let agents = params
        .departure_times()
        .into_iter()
        .enumerate()
        .map(|(k, t0)| {
            AgentSpec::new(
                k,
                t0,
                NodeId(n + k),
                params.budget,
                params.search_radius,
                params.penalty,
            )
        })
        .collect();
    let recovery = match params.recovery_threshold {
        Some(t_thres) => Recovery { enabled: true, t_thres },
        None => Recovery::default(),
    };
    Ok(Instance::new(graph, agents, params.beta_global)?.with_recovery(recovery))
}

/// Axis values of a factorial design. Empty axes keep the base value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grid {
    pub agents: Vec<usize>,
    pub start_radius: Vec<f64>,
    pub search_radius: Vec<f64>,
    pub start_horizon: Vec<Minutes>,
    pub mean_availability: Vec<f64>,
}

impl Grid {
    /// The 9 x 3 x 2 x 4 design of the experiments, for one availability level.
    pub fn standard() -> Self {
        Self {
            agents: (2..=10).collect(),
            start_radius: vec![100.0, 300.0, 700.0],
            search_radius: vec![1000.0, 2000.0],
            start_horizon: vec![0.0, 1.0, 5.0, 15.0],
            mean_availability: Vec::new(),
        }
    }
}

fn axis<T: Copy>(values: &[T], base: T) -> Vec<T> {
    if values.is_empty() {
        vec![base]
    } else {
        values.to_vec()
    }
}

/// Cartesian product of `grid` over `base`, ordered with the agent count as
/// the outermost axis.
pub fn full_factorial(base: &GenParams, grid: &Grid) -> Vec<GenParams> {
    let mut out = Vec::new();
    for n in axis(&grid.agents, base.agents) {
        for rs in axis(&grid.start_radius, base.start_radius) {
            for sr in axis(&grid.search_radius, base.search_radius) {
                for ts in axis(&grid.start_horizon, base.start_horizon) {
                    for da in axis(&grid.mean_availability, base.mean_availability) {
                        out.push(GenParams {
                            agents: n,
                            start_radius: rs,
                            search_radius: sr,
                            start_horizon: ts,
                            mean_availability: da,
                            ..base.clone()
                        });
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn departure_spacing() {
        let p = GenParams {
            agents: 4,
            start_horizon: 15.0,
            ..GenParams::default()
        };
        assert_eq!(p.departure_times(), vec![0.0, 5.0, 10.0, 15.0]);
        let p = GenParams {
            agents: 3,
            start_horizon: 0.0,
            ..GenParams::default()
        };
        assert_eq!(p.departure_times(), vec![0.0; 3]);
    }

    #[test]
    fn factorial_sizes() {
        let base = GenParams::default();
        assert_eq!(full_factorial(&base, &Grid::standard()).len(), 216);
        assert_eq!(full_factorial(&base, &Grid::default()).len(), 1);
        let g = Grid {
            agents: vec![2, 3],
            start_horizon: vec![0.0, 5.0],
            ..Grid::default()
        };
        assert_eq!(full_factorial(&base, &g).len(), 4);
    }

    #[test]
    fn deterministic_and_reachable() {
        let p = GenParams::default();
        let a = generate(&p, 11).unwrap();
        let b = generate(&p, 11).unwrap();
        assert_eq!(a.graph.stations(), b.graph.stations());
        assert_eq!(a.agents, b.agents);
        assert_ne!(generate(&p, 12).unwrap().graph.stations(), a.graph.stations());
        for i in 0..a.num_agents() {
            let ag = a.agent(i);
            assert!(a
                .graph
                .station_ids()
                .any(|s| a.within_radius(i, s) && a.graph.travel(ag.start, s.node()) <= ag.budget));
        }
        assert!(a.agents.windows(2).all(|w| w[0].t0 <= w[1].t0));
    }

    #[test]
    fn availability_mean_matches() {
        let p = GenParams {
            agents: 1,
            start_radius: 100.0,
            search_radius: 8000.0,
            station_density: 5.0,
            ..GenParams::default()
        };
        let inst = generate(&p, 3).unwrap();
        let ps = inst.graph.base_probabilities();
        assert!(ps.len() >= 1000, "{}", ps.len());
        let mean = ps.iter().sum::<f64>() / ps.len() as f64;
        // Beta(2.5, 7.5) has variance 0.25 * 0.75 / 11.
        let sd = (0.25 * 0.75 / 11.0 / ps.len() as f64).sqrt();
        assert!((mean - 0.25).abs() <= 3.0 * sd, "{mean}");
    }

    #[test]
    fn bad_params_rejected() {
        let p = GenParams {
            mean_availability: 1.0,
            ..GenParams::default()
        };
        assert!(matches!(generate(&p, 0), Err(GenError::Param(_))));
    }
}
