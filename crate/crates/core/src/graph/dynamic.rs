use alloc::format;
use alloc::vec::Vec;

use super::{compose, DirectedGraph};
use crate::{Error, Result};

/// Activation round `t_i ≥ 1` of every node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActivationSchedule {
    starts: Vec<usize>,
}

impl ActivationSchedule {
    pub fn new(starts: Vec<usize>) -> Result<Self> {
        if let Some(i) = starts.iter().position(|&t| t == 0) {
            return Err(Error::InvalidSchedule(format!(
                "node {i} starts at round 0; rounds are numbered from 1"
            )));
        }
        Ok(Self { starts })
    }

    /// Every node active from round 1.
    pub fn synchronous(n: usize) -> Self {
        Self {
            starts: alloc::vec![1; n],
        }
    }

    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    pub fn is_active(&self, node: usize, round: usize) -> bool {
        round >= self.starts[node]
    }

    pub fn last_start(&self) -> usize {
        self.starts.iter().copied().max().unwrap_or(1)
    }

    pub fn is_synchronous(&self) -> bool {
        self.starts.iter().all(|&t| t == 1)
    }

    /// Earliest-wakeup closure of `starts` over a static graph: a node hearing
    /// an active neighbour in round `t` is active from round `t + 1` on, so
    /// every arc `(i, j)` ends up with `t_j ≤ t_i + 1`.
    pub fn diffusive_closure(base: &DirectedGraph, mut starts: Vec<usize>) -> Result<Self> {
        if starts.len() != base.n() {
            return Err(Error::SizeMismatch {
                left: starts.len(),
                right: base.n(),
            });
        }
        let mut changed = true;
        while changed {
            changed = false;
            for (i, j) in base.arcs() {
                if starts[j] > starts[i] + 1 {
                    starts[j] = starts[i] + 1;
                    changed = true;
                }
            }
        }
        Self::new(starts)
    }
}

/// An eventually periodic dynamic graph: explicit rounds `1..=prefix.len()`
/// followed by `period` repeated forever, with the activation schedule.
///
/// Every round carries a self-loop at each active node and no arc touching
/// a passive node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DynamicGraph {
    n: usize,
    prefix: Vec<DirectedGraph>,
    period: Vec<DirectedGraph>,
    schedule: ActivationSchedule,
}

impl DynamicGraph {
    pub fn new(
        n: usize,
        prefix: Vec<DirectedGraph>,
        period: Vec<DirectedGraph>,
        schedule: ActivationSchedule,
    ) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidArgument(
                "period must contain at least one round".into(),
            ));
        }
        if schedule.len() != n {
            return Err(Error::SizeMismatch {
                left: schedule.len(),
                right: n,
            });
        }
        if let Some(g) = prefix.iter().chain(&period).find(|g| g.n() != n) {
            return Err(Error::SizeMismatch {
                left: g.n(),
                right: n,
            });
        }
        // the periodic part must see every node active
        if schedule.last_start() > prefix.len() + 1 {
            return Err(Error::InvalidSchedule(format!(
                "last activation at round {} falls inside the periodic part (prefix has {} rounds)",
                schedule.last_start(),
                prefix.len()
            )));
        }
        let g = Self {
            n,
            prefix,
            period,
            schedule,
        };
        for round in 1..=g.prefix.len() + g.period.len() {
            g.check_round(round)?;
        }
        Ok(g)
    }

    fn check_round(&self, round: usize) -> Result<()> {
        let arcs = self.arcs_at(round);
        for node in 0..self.n {
            if self.schedule.is_active(node, round) && !arcs.contains(node, node) {
                return Err(Error::MalformedGraph {
                    round,
                    node,
                    reason: "is active but has no self-loop",
                });
            }
        }
        for (i, j) in arcs.arcs() {
            for node in [i, j] {
                if !self.schedule.is_active(node, round) {
                    return Err(Error::MalformedGraph {
                        round,
                        node,
                        reason: "is passive but has an incident arc",
                    });
                }
            }
        }
        Ok(())
    }

    /// The same graph every round, with all nodes active from round 1.
    pub fn static_graph(base: DirectedGraph) -> Result<Self> {
        let n = base.n();
        Self::new(
            n,
            Vec::new(),
            alloc::vec![base],
            ActivationSchedule::synchronous(n),
        )
    }

    /// `base` in every round, restricted to the nodes active in that round.
    pub fn static_with_schedule(
        base: &DirectedGraph,
        schedule: ActivationSchedule,
    ) -> Result<Self> {
        Self::static_graph(base.clone())?.with_schedule(schedule)
    }

    /// Re-times the graph under a new schedule: arcs touching nodes that are
    /// still passive are dropped. Nodes active earlier than before must
    /// already have their self-loops.
    pub fn with_schedule(&self, schedule: ActivationSchedule) -> Result<Self> {
        if schedule.len() != self.n {
            return Err(Error::SizeMismatch {
                left: schedule.len(),
                right: self.n,
            });
        }
        let prefix_len = self
            .prefix
            .len()
            .max(schedule.last_start().saturating_sub(1));
        let prefix = (1..=prefix_len)
            .map(|t| self.arcs_at(t).restricted(|i| schedule.is_active(i, t)))
            .collect();
        let period = (0..self.period.len())
            .map(|k| self.arcs_at(prefix_len + 1 + k).clone())
            .collect();
        Self::new(self.n, prefix, period, schedule)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prefix(&self) -> &[DirectedGraph] {
        &self.prefix
    }

    pub fn period(&self) -> &[DirectedGraph] {
        &self.period
    }

    pub fn schedule(&self) -> &ActivationSchedule {
        &self.schedule
    }

    /// Arcs of round `round ≥ 1`.
    pub fn arcs_at(&self, round: usize) -> &DirectedGraph {
        assert!(round >= 1, "rounds are numbered from 1");
        if round <= self.prefix.len() {
            &self.prefix[round - 1]
        } else {
            &self.period[(round - self.prefix.len() - 1) % self.period.len()]
        }
    }

    /// Last round whose graph can differ from all later ones' representatives:
    /// checking rounds `1..=explicit_rounds()` covers every distinct round.
    pub fn explicit_rounds(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    /// First `(node, round)` at which a node receives a message from another
    /// node before its own activation, if any.
    pub fn diffusive_start_violation(&self) -> Option<(usize, usize)> {
        (1..=self.explicit_rounds()).find_map(|t| {
            self.arcs_at(t)
                .arcs()
                .find(|&(i, j)| i != j && !self.schedule.is_active(j, t))
                .map(|(_, j)| (j, t))
        })
    }
}

/// `G(from ∘ … ∘ to)`: the left-to-right product of rounds `from..=to`.
pub fn interval_product(g: &DynamicGraph, from: usize, to: usize) -> Result<DirectedGraph> {
    if from == 0 || from > to {
        return Err(Error::InvalidArgument(format!(
            "interval [{from}, {to}] must satisfy 1 ≤ from ≤ to"
        )));
    }
    (from + 1..=to).try_fold(g.arcs_at(from).clone(), |acc, t| {
        compose(&acc, g.arcs_at(t))
    })
}

/// Smallest `d ≤ d_max` such that every window `G(s : s + d − 1)` with
/// `s ≥ from_round` is the complete graph, or `None`.
///
/// Windows starting after the prefix repeat with the period, so it is enough
/// to inspect one full period of window starts beyond the prefix.
pub fn dynamic_diameter(g: &DynamicGraph, from_round: usize, d_max: usize) -> Option<usize> {
    if from_round == 0 || d_max == 0 {
        return None;
    }
    let n = g.n();
    let adjacency: Vec<Vec<Vec<u64>>> = (1..=g.explicit_rounds())
        .map(|t| g.arcs_at(t).adjacency_bits())
        .collect();
    let bits_at = |t: usize| -> &Vec<Vec<u64>> {
        let p = g.prefix().len();
        let idx = if t <= p {
            t - 1
        } else {
            p + (t - p - 1) % g.period().len()
        };
        &adjacency[idx]
    };
    let words = n.div_ceil(64);
    let full_row: Vec<u64> = (0..words)
        .map(|w| {
            let bits = (n - w * 64).min(64);
            if bits == 64 {
                u64::MAX
            } else {
                (1u64 << bits) - 1
            }
        })
        .collect();

    // complete[d - 1]: every window inspected so far is complete after d rounds
    let mut complete = alloc::vec![true; d_max];
    let last_start = from_round.max(g.prefix().len() + 1) + g.period().len() - 1;
    for start in from_round..=last_start {
        let mut reach = bits_at(start).clone();
        for d in 1..=d_max {
            if d > 1 {
                let step = bits_at(start + d - 1);
                reach = reach
                    .iter()
                    .map(|row| {
                        let mut next = alloc::vec![0u64; words];
                        for k in 0..n {
                            if row[k / 64] >> (k % 64) & 1 == 1 {
                                for (acc, w) in next.iter_mut().zip(&step[k]) {
                                    *acc |= w;
                                }
                            }
                        }
                        next
                    })
                    .collect();
            }
            if complete[d - 1] && !reach.iter().all(|row| *row == full_row) {
                complete[d - 1] = false;
            }
        }
        if !complete.contains(&true) {
            return None;
        }
    }
    complete.iter().position(|&ok| ok).map(|i| i + 1)
}
