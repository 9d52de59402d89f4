use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{FiniteAlgorithm, Message, Multiset, State};
use crate::{Error, Result};

/// How a table-driven transition sees the received multiset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Abstraction {
    /// Only which messages were received.
    Set,
    /// Per-message counts, saturated at the cap (`cap` reads as "≥ cap").
    Saturating(u32),
}

impl Abstraction {
    fn cap(self) -> u32 {
        match self {
            Abstraction::Set => 1,
            Abstraction::Saturating(k) => k,
        }
    }
}

/// One transition row, by name. `received` maps message names to their
/// (abstracted) counts; absent messages count as zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub state: String,
    pub received: BTreeMap<String, u32>,
    pub next: String,
}

/// Name-level description of a table-driven algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSpec {
    pub name: String,
    pub states: Vec<String>,
    pub initial: Vec<String>,
    pub period: u64,
    pub clock: BTreeMap<String, u64>,
    pub message: BTreeMap<String, String>,
    pub mode: Abstraction,
    pub rows: Vec<TableRow>,
}

type Key = Vec<(Message, u32)>;

/// Upper bound on abstract keys per state; beyond it a table is not
/// realistically writable anyway.
const MAX_KEYS: usize = 1 << 20;

/// A finite algorithm given by an explicit transition table over an
/// abstraction of the received multiset.
#[derive(Debug, Clone)]
pub struct TableAlgorithm {
    name: String,
    period: u64,
    mode: Abstraction,
    state_names: Vec<String>,
    message_names: Vec<String>,
    states: Vec<State>,
    initial: Vec<State>,
    clock: Vec<u64>,
    message: Vec<Message>,
    table: BTreeMap<(State, Key), State>,
}

fn schema(msg: String) -> Error {
    Error::InvalidArgument(msg)
}

impl TableAlgorithm {
    pub fn new(spec: TableSpec) -> Result<Self> {
        if spec.period < 2 {
            return Err(schema(format!("P = {} must exceed 1", spec.period)));
        }
        if let Abstraction::Saturating(0) = spec.mode {
            return Err(schema("saturation cap must be at least 1".into()));
        }
        if spec.states.is_empty() {
            return Err(schema("no states".into()));
        }
        let mut state_ids = BTreeMap::new();
        for (i, name) in spec.states.iter().enumerate() {
            if state_ids.insert(name.clone(), State(i as u64)).is_some() {
                return Err(schema(format!("duplicate state {name:?}")));
            }
        }
        let lookup_state = |name: &str| {
            state_ids
                .get(name)
                .copied()
                .ok_or_else(|| schema(format!("unknown state {name:?}")))
        };
        let mut initial = spec
            .initial
            .iter()
            .map(|n| lookup_state(n))
            .collect::<Result<Vec<_>>>()?;
        initial.sort_unstable();
        initial.dedup();
        if initial.is_empty() {
            return Err(schema("no initial state".into()));
        }

        let mut clock = Vec::with_capacity(spec.states.len());
        let mut message_of_name = Vec::with_capacity(spec.states.len());
        for name in &spec.states {
            let c = *spec
                .clock
                .get(name)
                .ok_or_else(|| schema(format!("no clock value for state {name:?}")))?;
            if c >= spec.period {
                return Err(Error::ClockRange {
                    state: name.clone(),
                    value: c,
                    period: spec.period,
                });
            }
            clock.push(c);
            let m = spec
                .message
                .get(name)
                .ok_or_else(|| schema(format!("no message for state {name:?}")))?;
            message_of_name.push(m.clone());
        }
        for name in spec.clock.keys().chain(spec.message.keys()) {
            lookup_state(name)?;
        }
        let message_names: Vec<String> = message_of_name
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let message_id = |name: &str| {
            message_names
                .binary_search_by(|m| m.as_str().cmp(name))
                .map(|i| Message(i as u64))
                .map_err(|_| schema(format!("unknown message {name:?}")))
        };
        let message = message_of_name
            .iter()
            .map(|m| message_id(m))
            .collect::<Result<Vec<_>>>()?;

        let cap = spec.mode.cap();
        let mut table = BTreeMap::new();
        for row in &spec.rows {
            let from = lookup_state(&row.state)?;
            let next = lookup_state(&row.next)?;
            let mut key: Key = Vec::new();
            for (m, &count) in &row.received {
                let id = message_id(m)?;
                if count == 0 {
                    continue;
                }
                if count > cap {
                    return Err(schema(format!(
                        "count {count} for message {m:?} exceeds the cap {cap}"
                    )));
                }
                key.push((id, count));
            }
            key.sort_unstable();
            if key.is_empty() {
                return Err(schema(format!(
                    "row for state {:?} receives nothing; received multisets are never empty",
                    row.state
                )));
            }
            if table.insert((from, key), next).is_some() {
                return Err(schema(format!(
                    "duplicate row for state {:?} with received {:?}",
                    row.state, row.received
                )));
            }
        }

        let alg = Self {
            name: spec.name,
            period: spec.period,
            mode: spec.mode,
            state_names: spec.states,
            message_names,
            states: (0..state_ids.len() as u64).map(State).collect(),
            initial,
            clock,
            message,
            table,
        };
        alg.check_total()?;
        Ok(alg)
    }

    /// Every `(state, abstract key)` pair must have a row.
    fn check_total(&self) -> Result<()> {
        let cap = self.mode.cap() as usize;
        let m = self.message_names.len();
        let per_state = (0..m).try_fold(1usize, |acc, _| acc.checked_mul(cap + 1));
        match per_state {
            Some(k) if k <= MAX_KEYS => {}
            _ => {
                return Err(schema(format!(
                    "{m} messages with cap {cap} give too many abstract keys"
                )))
            }
        }
        for &q in &self.states {
            let mut counts = alloc::vec![0u32; m];
            loop {
                // odometer increment over {0..=cap}^m
                let mut pos = 0;
                while pos < m && counts[pos] as usize == cap {
                    counts[pos] = 0;
                    pos += 1;
                }
                if pos == m {
                    break;
                }
                counts[pos] += 1;
                let key: Key = counts
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(i, &c)| (Message(i as u64), c))
                    .collect();
                if !self.table.contains_key(&(q, key.clone())) {
                    return Err(Error::PartialTable {
                        state: self.state_name(q),
                        received: self.describe_key(&key),
                    });
                }
            }
        }
        Ok(())
    }

    fn describe_key(&self, key: &Key) -> String {
        let parts: Vec<String> = key
            .iter()
            .map(|&(m, c)| format!("{}: {}", self.message_name(m), c))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    fn abstract_key(&self, received: &Multiset) -> Key {
        let cap = self.mode.cap();
        received
            .counts()
            .into_iter()
            .map(|(m, c)| (m, (c as u32).min(cap)))
            .collect()
    }

    pub fn mode(&self) -> Abstraction {
        self.mode
    }

    /// Number of table rows.
    pub fn rows(&self) -> usize {
        self.table.len()
    }
}

impl FiniteAlgorithm for TableAlgorithm {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn period(&self) -> u64 {
        self.period
    }

    fn states(&self) -> Option<&[State]> {
        Some(&self.states)
    }

    fn initial_states(&self) -> &[State] {
        &self.initial
    }

    fn message_of(&self, state: State) -> Message {
        self.message[state.0 as usize]
    }

    fn transition(&self, state: State, received: &Multiset) -> State {
        let key = self.abstract_key(received);
        *self
            .table
            .get(&(state, key))
            .expect("transition table is total over realizable keys")
    }

    fn clock_of(&self, state: State) -> u64 {
        self.clock[state.0 as usize]
    }

    fn state_name(&self, state: State) -> String {
        self.state_names[state.0 as usize].clone()
    }

    fn message_name(&self, message: Message) -> String {
        self.message_names[message.0 as usize].clone()
    }

    fn parse_state(&self, name: &str) -> Option<State> {
        self.state_names
            .iter()
            .position(|n| n == name)
            .map(|i| State(i as u64))
    }
}
