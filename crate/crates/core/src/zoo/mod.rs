//! Reference algorithms on both sides of the impossibility boundary.

mod table;

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{FiniteAlgorithm, Message, Multiset, State};

pub use table::{Abstraction, TableAlgorithm, TableRow, TableSpec};

/// `Q = M = [P]`, `σ = id`, `τ(q, S) = (max S + 1) mod P`, clock = state.
///
/// A bounded candidate that the adversary always defeats.
#[derive(Debug, Clone)]
pub struct ModMax {
    period: u64,
    states: Vec<State>,
}

impl ModMax {
    pub fn new(period: u64) -> Self {
        assert!(period >= 2, "period must exceed 1");
        Self {
            period,
            states: (0..period).map(State).collect(),
        }
    }
}

impl FiniteAlgorithm for ModMax {
    fn name(&self) -> String {
        format!("modmax:{}", self.period)
    }

    fn period(&self) -> u64 {
        self.period
    }

    fn states(&self) -> Option<&[State]> {
        Some(&self.states)
    }

    fn initial_states(&self) -> &[State] {
        &self.states
    }

    fn message_of(&self, state: State) -> Message {
        Message(state.0)
    }

    fn transition(&self, state: State, received: &Multiset) -> State {
        let top = received.largest().map_or(state.0, |m| m.0);
        State((top + 1) % self.period)
    }

    fn clock_of(&self, state: State) -> u64 {
        state.0
    }
}

/// Unbounded flood-max counter: `τ(h, S) = 1 + max S`, clock `h mod P`.
///
/// Synchronizes on every strongly connected static graph; its state space
/// is the naturals, so the adversary refuses it.
#[derive(Debug, Clone)]
pub struct FloodMax {
    period: u64,
}

impl FloodMax {
    pub fn new(period: u64) -> Self {
        assert!(period >= 2, "period must exceed 1");
        Self { period }
    }
}

const FLOOD_INITIAL: [State; 1] = [State(0)];

impl FiniteAlgorithm for FloodMax {
    fn name(&self) -> String {
        format!("floodmax:{}", self.period)
    }

    fn period(&self) -> u64 {
        self.period
    }

    fn states(&self) -> Option<&[State]> {
        None
    }

    fn initial_states(&self) -> &[State] {
        &FLOOD_INITIAL
    }

    fn message_of(&self, state: State) -> Message {
        Message(state.0)
    }

    fn transition(&self, state: State, received: &Multiset) -> State {
        let top = received.largest().map_or(state.0, |m| m.0);
        State(top.saturating_add(1))
    }

    fn clock_of(&self, state: State) -> u64 {
        state.0 % self.period
    }
}

/// `k` states that never change; clock = state mod 2.
#[derive(Debug, Clone)]
pub struct Frozen {
    states: Vec<State>,
}

impl Frozen {
    pub fn new(size: u64) -> Self {
        assert!(size >= 1, "need at least one state");
        Self {
            states: (0..size).map(State).collect(),
        }
    }
}

impl FiniteAlgorithm for Frozen {
    fn name(&self) -> String {
        format!("frozen:{}", self.states.len())
    }

    fn period(&self) -> u64 {
        2
    }

    fn states(&self) -> Option<&[State]> {
        Some(&self.states)
    }

    fn initial_states(&self) -> &[State] {
        &self.states
    }

    fn message_of(&self, state: State) -> Message {
        Message(state.0)
    }

    fn transition(&self, state: State, _received: &Multiset) -> State {
        state
    }

    fn clock_of(&self, state: State) -> u64 {
        state.0 % 2
    }
}

/// Builtin families accepted by [`builtin`], with a one-line description.
pub const BUILTIN_FAMILIES: &[(&str, &str)] = &[
    ("modmax:P", "bounded max-plus-one counter mod P (P states)"),
    (
        "floodmax[:P]",
        "unbounded flood-max counter, clock = h mod P (default P = 2)",
    ),
    (
        "frozen:K",
        "K states that never change, clock = state mod 2",
    ),
];

/// Resolves a builtin algorithm name such as `modmax:3`.
pub fn builtin(name: &str) -> Option<Box<dyn FiniteAlgorithm>> {
    let (family, arg) = match name.split_once(':') {
        Some((f, a)) => (f, Some(a.parse::<u64>().ok()?)),
        None => (name, None),
    };
    match (family, arg) {
        ("modmax", Some(p)) if p >= 2 => Some(Box::new(ModMax::new(p))),
        ("floodmax", None) => Some(Box::new(FloodMax::new(2))),
        ("floodmax", Some(p)) if p >= 2 => Some(Box::new(FloodMax::new(p))),
        ("frozen", Some(k)) if k >= 1 => Some(Box::new(Frozen::new(k))),
        _ => None,
    }
}

/// A fixed set of enumerable builtins used for cross-checks.
pub fn enumerable_catalog() -> Vec<Box<dyn FiniteAlgorithm>> {
    [
        "modmax:2", "modmax:3", "modmax:4", "modmax:5", "frozen:1", "frozen:2", "frozen:3",
    ]
    .iter()
    .filter_map(|name| builtin(name))
    .collect()
}
