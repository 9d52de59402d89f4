//! Counterexample executions against bounded-memory synchronizers.
//!
//! Each forge builds a network and initial configuration from the
//! algorithm's own transition function, predicts every node's state in
//! closed form, simulates, and checks both the prediction and a state
//! equality that rules out mod-P synchronization.

mod rings;
mod two_group;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::graph::DynamicGraph;
use crate::model::{
    check_mod_p_sync, execute, FiniteAlgorithm, Initialization, State, SyncVerdict, Trace,
};
use crate::sequence::PeriodicityCertificate;
use crate::{Error, Result};

pub const DEFAULT_NODE_BUDGET: usize = 2000;
/// Default number of sequence periods simulated on the ring constructions.
pub const DEFAULT_PERIODS: usize = 20;
/// Extra rounds simulated past `n` on the ring-prefix construction.
pub const RING_PREFIX_EXTRA_ROUNDS: usize = 4;
pub const DEFAULT_K_MAX: usize = 8;

/// Which construction produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Construction {
    /// Self-stabilizing, static directed ring of one sequence period.
    DirectedRing,
    /// Self-stabilizing, static bidirectional ring of two interleaved periods.
    BidirectionalRing,
    /// Self-stabilizing, directed ring of arbitrary size `n`: no
    /// synchronization within `n − 3` rounds.
    RingPrefix,
    /// Diffusive starts, two groups alternately feeding each other.
    TwoGroup,
}

impl Construction {
    pub fn tag(self) -> &'static str {
        match self {
            Construction::DirectedRing => "T1",
            Construction::BidirectionalRing => "T2",
            Construction::RingPrefix => "T3",
            Construction::TwoGroup => "T4",
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Construction::DirectedRing),
            2 => Some(Construction::BidirectionalRing),
            3 => Some(Construction::RingPrefix),
            4 => Some(Construction::TwoGroup),
            _ => None,
        }
    }
}

/// A node at the end of a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub node: usize,
    pub round: usize,
}

impl Cell {
    pub fn new(node: usize, round: usize) -> Self {
        Self { node, round }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `s_left = s_right = state`. With `right.round = left.round + 1` and
    /// both nodes supposed to agree at `left.round`, a clock would have to
    /// advance and stay put at once.
    StateEquality {
        label: &'static str,
        left: Cell,
        right: Cell,
        state: State,
    },
    /// No synchronized suffix of the trace starts at or before this round.
    NoEarlySync { up_to_round: usize },
}

#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub construction: Construction,
    pub algorithm: String,
    pub period: u64,
    /// Seed states by role (`q0`, `q1`, `p0`, `q00`).
    pub seeds: Vec<(&'static str, State)>,
    pub graph: DynamicGraph,
    pub init: Vec<State>,
    pub initialization: Initialization,
    pub horizon: usize,
    pub certificate: PeriodicityCertificate,
    /// Every checked `(node, round)` equals its closed-form prediction.
    pub prediction_match: bool,
    pub predictions_checked: usize,
    pub witnesses: Vec<Witness>,
    /// Suffix length handed to the synchronization check.
    pub min_suffix: usize,
    pub verdict: SyncVerdict,
    pub trace: Trace,
}

impl CounterexampleReport {
    /// Replays the stored inputs and re-checks every witness and the verdict
    /// against the fresh trace.
    pub fn recheck(&self, alg: &dyn FiniteAlgorithm) -> Result<()> {
        let trace = execute(
            alg,
            &self.graph,
            &self.init,
            self.initialization,
            self.horizon,
        )?;
        if trace != self.trace {
            return Err(Error::TheoremViolation(
                "replayed trace differs from the stored one".into(),
            ));
        }
        for w in &self.witnesses {
            check_witness(&trace, alg.period(), w)?;
        }
        let verdict = check_mod_p_sync(&trace, alg.period(), self.min_suffix)?;
        if verdict != self.verdict || verdict.is_synchronized() {
            return Err(Error::TheoremViolation(format!(
                "replayed verdict {verdict:?}"
            )));
        }
        Ok(())
    }
}

fn check_witness(trace: &Trace, period: u64, witness: &Witness) -> Result<()> {
    match *witness {
        Witness::StateEquality {
            label,
            left,
            right,
            state,
        } => {
            let a = trace.state(left.node, left.round);
            let b = trace.state(right.node, right.round);
            if a != state || b != state {
                return Err(Error::TheoremViolation(format!(
                    "{label}: s_{}({}) = {:?}, s_{}({}) = {:?}, expected {:?}",
                    left.node, left.round, a, right.node, right.round, b, state
                )));
            }
        }
        Witness::NoEarlySync { up_to_round } => {
            let min_suffix = trace.horizon() - up_to_round;
            if check_mod_p_sync(trace, period, min_suffix)?.is_synchronized() {
                return Err(Error::TheoremViolation(format!(
                    "trace synchronizes by round {up_to_round}"
                )));
            }
        }
    }
    Ok(())
}

/// Builds counterexamples against one algorithm.
pub struct Adversary<'a> {
    alg: &'a dyn FiniteAlgorithm,
    node_budget: usize,
}

impl<'a> Adversary<'a> {
    pub fn new(alg: &'a dyn FiniteAlgorithm) -> Self {
        Self {
            alg,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }

    pub fn with_node_budget(mut self, budget: usize) -> Self {
        self.node_budget = budget;
        self
    }

    pub fn algorithm(&self) -> &'a dyn FiniteAlgorithm {
        self.alg
    }

    fn enumerable(&self) -> Result<()> {
        match self.alg.states() {
            Some(_) => Ok(()),
            None => Err(Error::Unenumerable(self.alg.name())),
        }
    }

    fn seed(&self, q: State) -> Result<State> {
        if self.alg.contains(q) {
            Ok(q)
        } else {
            Err(Error::UnknownState(q))
        }
    }

    fn within_budget(&self, nodes: usize) -> Result<()> {
        if nodes > self.node_budget {
            return Err(Error::SizeLimit {
                nodes: format!("{nodes}"),
                budget: self.node_budget,
            });
        }
        Ok(())
    }

    /// Runs the execution and compares it with `predict(node, round)` on
    /// every cell where the prediction is defined.
    fn simulate_and_compare(
        &self,
        graph: &DynamicGraph,
        init: &[State],
        initialization: Initialization,
        horizon: usize,
        predict: impl Fn(usize, usize) -> Option<State>,
    ) -> Result<(Trace, usize)> {
        let trace = execute(self.alg, graph, init, initialization, horizon)?;
        let mut checked = 0;
        for round in 0..=horizon {
            for node in 0..graph.n() {
                if let Some(predicted) = predict(node, round) {
                    let simulated = trace.state(node, round);
                    if simulated != predicted {
                        return Err(Error::PredictionMismatch {
                            node,
                            round,
                            predicted,
                            simulated,
                        });
                    }
                    checked += 1;
                }
            }
        }
        Ok((trace, checked))
    }

    /// Verifies the witnesses and computes the verdict, which must come out
    /// negative.
    fn conclude(
        &self,
        trace: &Trace,
        witnesses: &[Witness],
        min_suffix: usize,
    ) -> Result<SyncVerdict> {
        let period = self.alg.period();
        for w in witnesses {
            check_witness(trace, period, w)?;
        }
        let verdict = check_mod_p_sync(trace, period, min_suffix)?;
        if verdict.is_synchronized() {
            return Err(Error::TheoremViolation(format!(
                "forged execution synchronizes: {verdict:?}"
            )));
        }
        Ok(verdict)
    }
}

/// Equality witness between `left` and `right`, reading the state from the
/// trace.
fn equality(trace: &Trace, label: &'static str, left: Cell, right: Cell) -> Witness {
    Witness::StateEquality {
        label,
        left,
        right,
        state: trace.state(left.node, left.round),
    }
}
