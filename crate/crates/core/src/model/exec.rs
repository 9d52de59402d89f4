use alloc::vec::Vec;

use super::{FiniteAlgorithm, Multiset, State};
use crate::graph::{DirectedGraph, DynamicGraph};
use crate::{Error, Result};

/// Whether initial states are restricted to the algorithm's `Q0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Initialization {
    #[default]
    Standard,
    /// Arbitrary states from `Q`.
    SelfStabilizing,
}

/// One round: every active node sends `σ(state)` along its out-arcs, then
/// steps with `τ(state, received)`. Passive nodes keep their state.
///
/// `arcs` must carry a self-loop at every active node and no arc touching
/// a passive node. `round` is only used in error reports.
pub fn apply_round(
    alg: &dyn FiniteAlgorithm,
    states: &[State],
    arcs: &DirectedGraph,
    active: &[bool],
    round: usize,
) -> Result<Vec<State>> {
    let n = states.len();
    if arcs.n() != n || active.len() != n {
        return Err(Error::SizeMismatch {
            left: n,
            right: if arcs.n() != n {
                arcs.n()
            } else {
                active.len()
            },
        });
    }
    if let Some(&q) = states.iter().find(|&&q| !alg.contains(q)) {
        return Err(Error::UnknownState(q));
    }
    for (node, &is_active) in active.iter().enumerate() {
        if is_active && !arcs.contains(node, node) {
            return Err(Error::MalformedGraph {
                round,
                node,
                reason: "is active but has no self-loop",
            });
        }
    }
    let mut inbox: Vec<Multiset> = (0..n).map(|_| Multiset::new()).collect();
    for (from, to) in arcs.arcs() {
        for node in [from, to] {
            if !active[node] {
                return Err(Error::MalformedGraph {
                    round,
                    node,
                    reason: "is passive but has an incident arc",
                });
            }
        }
        inbox[to].insert(alg.message_of(states[from]));
    }
    Ok(states
        .iter()
        .zip(inbox.iter())
        .zip(active)
        .map(|((&q, received), &is_active)| {
            if is_active {
                alg.transition(q, received)
            } else {
                q
            }
        })
        .collect())
}

/// Full execution matrix `s_i(t)` for `t ∈ [0, horizon]`; column 0 holds the
/// initial states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    columns: Vec<Vec<State>>,
    clocks: Vec<Vec<u64>>,
}

impl Trace {
    pub fn n(&self) -> usize {
        self.columns[0].len()
    }

    pub fn horizon(&self) -> usize {
        self.columns.len() - 1
    }

    /// `s_node(round)`.
    pub fn state(&self, node: usize, round: usize) -> State {
        self.columns[round][node]
    }

    pub fn clock(&self, node: usize, round: usize) -> u64 {
        self.clocks[round][node]
    }

    /// States of all nodes at the end of `round`.
    pub fn column(&self, round: usize) -> &[State] {
        &self.columns[round]
    }

    pub fn clock_column(&self, round: usize) -> &[u64] {
        &self.clocks[round]
    }

    /// Builds a trace from raw columns, deriving clocks through `clock_of`.
    pub fn from_columns(alg: &dyn FiniteAlgorithm, columns: Vec<Vec<State>>) -> Self {
        let clocks = columns
            .iter()
            .map(|col| col.iter().map(|&q| alg.clock_of(q)).collect())
            .collect();
        Self { columns, clocks }
    }

    /// Builds a trace directly from clock values; states are left as the
    /// clock values themselves. Handy for exercising the sync checker.
    pub fn from_clocks(clocks: Vec<Vec<u64>>) -> Self {
        let columns = clocks
            .iter()
            .map(|col| col.iter().map(|&c| State(c)).collect())
            .collect();
        Self { columns, clocks }
    }
}

/// Runs `alg` on `graph` from `init` for `horizon` rounds.
pub fn execute(
    alg: &dyn FiniteAlgorithm,
    graph: &DynamicGraph,
    init: &[State],
    initialization: Initialization,
    horizon: usize,
) -> Result<Trace> {
    let n = graph.n();
    if init.len() != n {
        return Err(Error::SizeMismatch {
            left: init.len(),
            right: n,
        });
    }
    if horizon == 0 {
        return Err(Error::HorizonTooSmall {
            horizon,
            last_start: graph.schedule().last_start(),
        });
    }
    let last_start = graph.schedule().last_start();
    if horizon < last_start {
        return Err(Error::HorizonTooSmall {
            horizon,
            last_start,
        });
    }
    for &q in init {
        if !alg.contains(q) {
            return Err(Error::UnknownState(q));
        }
        if initialization == Initialization::Standard && !alg.is_initial(q) {
            return Err(Error::NotInitial(q));
        }
    }
    let mut columns = Vec::with_capacity(horizon + 1);
    columns.push(init.to_vec());
    let mut active = alloc::vec![false; n];
    for round in 1..=horizon {
        for (node, flag) in active.iter_mut().enumerate() {
            *flag = graph.schedule().is_active(node, round);
        }
        let next = apply_round(
            alg,
            &columns[round - 1],
            graph.arcs_at(round),
            &active,
            round,
        )?;
        columns.push(next);
    }
    Ok(Trace::from_columns(alg, columns))
}
