//! Execution semantics: agents, rounds, traces and the mod-P synchronization
//! verdict.

mod exec;
mod sync;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

pub use exec::{apply_round, execute, Initialization, Trace};
pub use sync::{check_mod_p_sync, default_min_suffix, SyncVerdict};

/// Opaque state token. Enumerable algorithms number their states densely;
/// unbounded ones may use the full range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State(pub u64);

/// Opaque message token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Message(pub u64);

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite multiset of messages. Equality is by element counts: the
/// messages are kept sorted so two multisets compare equal regardless of
/// the order in which they were received.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset(Vec<Message>);

impl Multiset {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn insert(&mut self, message: Message) {
        let at = self.0.partition_point(|m| *m <= message);
        self.0.insert(at, message);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Messages in nondecreasing order, with repetition.
    pub fn iter(&self) -> impl Iterator<Item = Message> + '_ {
        self.0.iter().copied()
    }

    pub fn largest(&self) -> Option<Message> {
        self.0.last().copied()
    }

    /// Distinct messages with their multiplicities, in increasing order.
    pub fn counts(&self) -> Vec<(Message, usize)> {
        let mut out: Vec<(Message, usize)> = Vec::new();
        for &m in &self.0 {
            match out.last_mut() {
                Some((last, c)) if *last == m => *c += 1,
                _ => out.push((m, 1)),
            }
        }
        out
    }
}

impl FromIterator<Message> for Multiset {
    fn from_iter<I: IntoIterator<Item = Message>>(iter: I) -> Self {
        let mut v: Vec<Message> = iter.into_iter().collect();
        v.sort_unstable();
        Self(v)
    }
}

/// An anonymous agent program `(Q, Q0, M, σ, τ)` together with its clock
/// readout modulo `period`.
///
/// `states()` returns `None` for reference algorithms whose state space is
/// not enumerable; the adversary refuses those.
pub trait FiniteAlgorithm: Send + Sync {
    fn name(&self) -> String;

    /// The synchronization period `P > 1`.
    fn period(&self) -> u64;

    fn states(&self) -> Option<&[State]>;

    fn initial_states(&self) -> &[State];

    fn message_of(&self, state: State) -> Message;

    fn transition(&self, state: State, received: &Multiset) -> State;

    /// Clock value in `[0, period)`.
    fn clock_of(&self, state: State) -> u64;

    fn contains(&self, state: State) -> bool {
        match self.states() {
            Some(states) => states.binary_search(&state).is_ok(),
            None => true,
        }
    }

    fn state_name(&self, state: State) -> String {
        format!("{}", state.0)
    }

    fn message_name(&self, message: Message) -> String {
        format!("{}", message.0)
    }

    /// Inverse of [`FiniteAlgorithm::state_name`].
    fn parse_state(&self, name: &str) -> Option<State> {
        let state = State(name.parse().ok()?);
        self.contains(state).then_some(state)
    }

    fn is_initial(&self, state: State) -> bool {
        self.initial_states().contains(&state)
    }

    /// Number of states, when enumerable.
    fn state_count(&self) -> Option<usize> {
        self.states().map(<[State]>::len)
    }
}

/// Checks the structural invariants of an enumerable algorithm: initial
/// states are a nonempty subset of the state set, clocks lie in
/// `[0, P)`, and no transition on a multiset of at most `max_multiset`
/// messages leaves the state set.
///
/// Unbounded algorithms only get the period and initial-state checks.
pub fn validate(alg: &dyn FiniteAlgorithm, max_multiset: usize) -> Result<()> {
    let period = alg.period();
    if period < 2 {
        return Err(Error::InvalidArgument(format!(
            "period {period} must exceed 1"
        )));
    }
    let initial = alg.initial_states();
    if initial.is_empty() {
        return Err(Error::InvalidArgument("no initial state".into()));
    }
    for &q in initial {
        if !alg.contains(q) {
            return Err(Error::UnknownState(q));
        }
    }
    let Some(states) = alg.states() else {
        return Ok(());
    };
    if states.is_empty() || states.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "state list must be nonempty, sorted and free of duplicates".into(),
        ));
    }
    for &q in states {
        let c = alg.clock_of(q);
        if c >= period {
            return Err(Error::ClockRange {
                state: alg.state_name(q),
                value: c,
                period,
            });
        }
    }
    let messages: Vec<Message> = states
        .iter()
        .map(|&q| alg.message_of(q))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    for size in 1..=max_multiset {
        for combo in multisets_of_size(&messages, size) {
            let received: Multiset = combo.into_iter().collect();
            for &q in states {
                let next = alg.transition(q, &received);
                if !alg.contains(next) {
                    return Err(Error::NotClosed(format!(
                        "{} --{:?}--> {:?}",
                        alg.state_name(q),
                        received,
                        next
                    )));
                }
            }
        }
    }
    Ok(())
}

/// All multisets of exactly `size` elements drawn from `alphabet`, as
/// nondecreasing index sequences.
fn multisets_of_size(alphabet: &[Message], size: usize) -> Vec<Vec<Message>> {
    let mut out = Vec::new();
    if alphabet.is_empty() {
        return out;
    }
    let mut idx = alloc::vec![0usize; size];
    loop {
        out.push(idx.iter().map(|&i| alphabet[i]).collect());
        // next nondecreasing sequence
        let mut pos = size;
        while pos > 0 && idx[pos - 1] == alphabet.len() - 1 {
            pos -= 1;
        }
        if pos == 0 {
            return out;
        }
        idx[pos - 1] += 1;
        let v = idx[pos - 1];
        for slot in &mut idx[pos..] {
            *slot = v;
        }
    }
}
