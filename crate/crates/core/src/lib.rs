//! Multi-agent stochastic charging-station search.
//!
//! Drivers look for a free charging station among stations whose availability
//! is only known in probability. A driver follows a search path (or receives
//! its next station on the fly) until it finds a free station or runs out of
//! time budget. Stations visited by one driver read as occupied for everybody
//! after, which is what makes the problem multi-agent.
//!
//! This crate is `no_std` (it needs `alloc`) and contains the whole
//! algorithmic side:
//!
//! - [`model`]: instances, agents, the centralized state machine.
//! - [`probability`]: prefix success, user-dependent availability, policy and
//!   system cost, recovery functions.
//! - [`label`]: the label-setting heuristic (LH) with heuristic dominance.
//! - [`planners`]: static decentralized settings (DEC, DEC-O, DEC-I, DEC-IO)
//!   and dynamic ones (rollout, LH-RO, DEC-O-d).
//! - [`benchmarks`]: myopic greedy and the perfect-information assignment.
//! - [`oracle`]: exhaustive evaluations for tiny instances.
//! - [`simulation`]: seeded Monte-Carlo evaluation and metrics.
//!
//! File formats, instance generation and the command line live in the
//! companion `mscps` crate.

#![no_std]
#![warn(missing_debug_implementations)]
// `!(x >= 0.0)` style checks are there to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod assignment;
pub mod benchmarks;
mod error;
pub mod label;
pub mod model;
pub mod oracle;
pub mod planners;
pub mod probability;
pub mod rng;
pub mod simulation;
pub mod stats;

pub use crate::error::{Error, Result};
pub use crate::model::{
    AgentSpec, AgentState, AgentStatus, CostTriple, Instance, Minutes, NodeId, Recovery, SearchPolicy, Station,
    StationGraph, StationId, SystemState, Visit,
};
pub use crate::probability::{AvailabilityContext, ConflictRule};
pub use crate::simulation::{RealizationMatrix, RunRecord, Setting, SimConfig};

/// Global failure penalty used in the experiments, in minutes.
pub const DEFAULT_BETA_GLOBAL: Minutes = 700.0;
/// Individual search budget, in minutes.
pub const DEFAULT_BUDGET: Minutes = 5.0;
/// Individual failure penalty, in minutes.
pub const DEFAULT_PENALTY: Minutes = 60.0;
/// Urban driving speed used to turn distances into travel times.
pub const DEFAULT_SPEED_KMH: f64 = 18.0;
