//! JSON instance files.
//!
//! ```json
//! {
//!   "stations": [{"id": 0, "x": 120.0, "y": -40.0, "p": 0.3, "mu": 0.05}],
//!   "travel_speed_kmh": 18.0,
//!   "agents": [{"id": 0, "t0": 0.0, "start": {"x": 0.0, "y": 0.0},
//!               "budget": 5.0, "radius": 2000.0, "penalty": 60.0}],
//!   "beta_global": 700.0,
//!   "recovery": {"enabled": false, "t_thres": 0.0}
//! }
//! ```
//!
//! Coordinates are meters, times minutes. Instead of `travel_speed_kmh` a file
//! may give `travel`, a row-major matrix over stations then agent starts (in
//! file order). `usage_cost` per agent is optional.

use std::fs;
use std::path::{Path, PathBuf};

use mscps_core::{AgentSpec, Instance, Minutes, NodeId, Recovery, Station, StationGraph};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Schema { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {source}")]
    Invalid { path: PathBuf, source: mscps_core::Error },
    #[error("{path}: exactly one of `travel_speed_kmh` and `travel` must be given")]
    TravelSpec { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationDoc {
    pub id: u32,
    pub x: f64,
    pub y: f64,
    pub p: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentDoc {
    pub id: usize,
    pub t0: Minutes,
    pub start: Point,
    pub budget: Minutes,
    pub radius: f64,
    pub penalty: Minutes,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub usage_cost: Vec<Minutes>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecoveryDoc {
    pub enabled: bool,
    pub t_thres: Minutes,
}

/// On-disk form of an [`Instance`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub stations: Vec<StationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub travel_speed_kmh: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub travel: Option<Vec<Minutes>>,
    pub agents: Vec<AgentDoc>,
    pub beta_global: Minutes,
    pub recovery: RecoveryDoc,
}

impl InstanceDoc {
    /// Describes `instance`. Metric graphs are written with `speed_kmh` when
    /// given, everything else with its explicit travel matrix.
    pub fn from_instance(instance: &Instance, speed_kmh: Option<f64>) -> Self {
        let g = &instance.graph;
        let stations = g
            .stations()
            .iter()
            .map(|s| StationDoc {
                id: s.id,
                x: s.x,
                y: s.y,
                p: s.p,
                mu: s.mu,
            })
            .collect();
        // Agents are written in start-node order so that an instance with one
        // origin per agent comes back with the same node numbering.
        let mut order: Vec<&AgentSpec> = instance.agents.iter().collect();
        order.sort_by_key(|a| a.start);
        let agents: Vec<AgentDoc> = order
            .iter()
            .map(|a| {
                let (x, y) = g.position(a.start);
                AgentDoc {
                    id: a.id,
                    t0: a.t0,
                    start: Point { x, y },
                    budget: a.budget,
                    radius: a.radius,
                    penalty: a.penalty,
                    usage_cost: a.usage_cost.clone(),
                }
            })
            .collect();
        let (travel_speed_kmh, travel) = match speed_kmh {
            Some(v) if g.is_metric() => (Some(v), None),
            _ => {
                let nodes: Vec<NodeId> = g
                    .station_ids()
                    .map(|s| s.node())
                    .chain(order.iter().map(|a| a.start))
                    .collect();
                let m = nodes
                    .iter()
                    .flat_map(|&a| nodes.iter().map(move |&b| g.travel(a, b)))
                    .collect();
                (None, Some(m))
            }
        };
        Self {
            stations,
            travel_speed_kmh,
            travel,
            agents,
            beta_global: instance.beta_global,
            recovery: RecoveryDoc {
                enabled: instance.recovery.enabled,
                t_thres: instance.recovery.t_thres,
            },
        }
    }

    pub fn to_instance(&self) -> mscps_core::Result<Instance> {
        let stations: Vec<Station> = self
            .stations
            .iter()
            .map(|s| Station {
                id: s.id,
                x: s.x,
                y: s.y,
                p: s.p,
                mu: s.mu,
            })
            .collect();
        let origins: Vec<(f64, f64)> = self.agents.iter().map(|a| (a.start.x, a.start.y)).collect();
        let n = stations.len();
        let graph = match (&self.travel, self.travel_speed_kmh) {
            (Some(m), None) => StationGraph::from_matrix(stations, origins, m.clone())?,
            (None, Some(v)) => StationGraph::from_coordinates(stations, origins, v)?,
            _ => return Err(mscps_core::Error::InvalidInstance("travel specification")),
        };
        let agents = self
            .agents
            .iter()
            .enumerate()
            .map(|(k, a)| {
                AgentSpec::new(a.id, a.t0, NodeId(n + k), a.budget, a.radius, a.penalty)
                    .with_usage_cost(a.usage_cost.clone())
            })
            .collect();
        Ok(Instance::new(graph, agents, self.beta_global)?.with_recovery(Recovery {
            enabled: self.recovery.enabled,
            t_thres: self.recovery.t_thres,
        }))
    }
}

pub fn parse_instance(text: &str, path: &Path) -> Result<Instance, IoError> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|source| IoError::Schema {
        path: path.to_path_buf(),
        source,
    })?;
    if doc.travel.is_some() == doc.travel_speed_kmh.is_some() {
        return Err(IoError::TravelSpec {
            path: path.to_path_buf(),
        });
    }
    doc.to_instance().map_err(|source| IoError::Invalid {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_instance(path: &Path) -> Result<Instance, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_instance(&text, path)
}

pub fn save_instance(path: &Path, instance: &Instance, speed_kmh: Option<f64>) -> Result<(), IoError> {
    let doc = InstanceDoc::from_instance(instance, speed_kmh);
    let mut text = serde_json::to_string_pretty(&doc).expect("instance documents always serialize");
    text.push('\n');
    fs::write(path, text).map_err(|source| IoError::Write {
        path: path.to_path_buf(),
        source,
    })
}
