use crate::model::{NodeId, StationId};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("probability {value} of station {station} is outside [0, 1]")]
    InvalidProbability { station: usize, value: f64 },
    #[error("invalid travel time {value} from node {from} to node {to}")]
    InvalidTravelTime { from: usize, to: usize, value: f64 },
    #[error("travel matrix has {got} entries, expected {expected}")]
    MatrixShape { expected: usize, got: usize },
    #[error("invalid agent {agent}: {reason}")]
    InvalidAgent { agent: usize, reason: &'static str },
    #[error("invalid instance: {0}")]
    InvalidInstance(&'static str),
    #[error("unknown node {0:?}")]
    UnknownNode(NodeId),
    #[error("unknown station {0:?}")]
    UnknownStation(StationId),
    #[error("agent {0} is not known to the instance")]
    UnknownAgent(usize),
    #[error("station {station:?} visited twice by agent {agent}")]
    RepeatedStation { agent: usize, station: StationId },
    #[error("station {station:?} is outside the search radius of agent {agent}")]
    OutsideRadius { agent: usize, station: StationId },
    #[error("visit of station {station:?} exceeds the budget of agent {agent}")]
    OverBudget { agent: usize, station: StationId },
    #[error("station {0:?} has already been observed")]
    ObservedStation(StationId),
    #[error("agent {0} has already terminated its search")]
    AbsorbingStatus(usize),
    #[error("transition not allowed for agent {agent}: {reason}")]
    InvalidTransition { agent: usize, reason: &'static str },
    #[error("labels at different nodes cannot be compared")]
    DifferentNodes,
    #[error("recovered availability is undefined for a station with p = 0")]
    ZeroProbability,
    #[error("instance too large for exhaustive evaluation: {0}")]
    TooLarge(&'static str),
    #[error("unknown setting `{0}`")]
    UnknownSetting(alloc::string::String),
}
