use alloc::string::String;

use crate::model::State;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed graph at round {round}: node {node} {reason}")]
    MalformedGraph {
        round: usize,
        node: usize,
        reason: &'static str,
    },
    #[error("graph sizes differ ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
    #[error("invalid activation schedule: {0}")]
    InvalidSchedule(String),
    #[error("state {0:?} is not a state of the algorithm")]
    UnknownState(State),
    #[error("state {0:?} is not an initial state (run is not self-stabilizing)")]
    NotInitial(State),
    #[error("horizon {horizon} is smaller than the last activation round {last_start}")]
    HorizonTooSmall { horizon: usize, last_start: usize },
    #[error("algorithm {0} has an unbounded state space")]
    Unenumerable(String),
    #[error("closed-form prediction disagrees with simulation at node {node}, round {round}: predicted {predicted:?}, simulated {simulated:?}")]
    PredictionMismatch {
        node: usize,
        round: usize,
        predicted: State,
        simulated: State,
    },
    #[error("impossibility witness failed: {0}")]
    TheoremViolation(String),
    #[error("network of {nodes} nodes exceeds the node budget of {budget}")]
    SizeLimit { nodes: String, budget: usize },
    #[error("transition table has no entry for state {state} with received {received}")]
    PartialTable { state: String, received: String },
    #[error("clock value {value} of state {state} is outside [0, {period})")]
    ClockRange {
        state: String,
        value: u64,
        period: u64,
    },
    #[error("transition escapes the state set: {0}")]
    NotClosed(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
