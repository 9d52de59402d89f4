//! Directed graphs, their products, and eventually-periodic dynamic graphs.

mod builders;
mod dynamic;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

pub use builders::{
    build_bidirectional_ring, build_directed_ring, build_two_group_schedule, two_group_arc_present,
    two_group_start_round,
};
pub use dynamic::{dynamic_diameter, interval_product, ActivationSchedule, DynamicGraph};

/// A directed graph over `[n]` without arc multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectedGraph {
    n: usize,
    arcs: BTreeSet<(usize, usize)>,
}

impl DirectedGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            arcs: BTreeSet::new(),
        }
    }

    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (i, j) in arcs {
            g.insert(i, j)?;
        }
        Ok(g)
    }

    /// Self-loops only: the neutral element of [`compose`].
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            arcs: (0..n).map(|i| (i, i)).collect(),
        }
    }

    pub fn complete(n: usize) -> Self {
        Self {
            n,
            arcs: (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect(),
        }
    }

    pub fn insert(&mut self, from: usize, to: usize) -> Result<()> {
        if from >= self.n || to >= self.n {
            return Err(Error::InvalidArgument(format!(
                "arc ({from}, {to}) outside a graph of {} nodes",
                self.n
            )));
        }
        self.arcs.insert((from, to));
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn contains(&self, from: usize, to: usize) -> bool {
        self.arcs.contains(&(from, to))
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn out_neighbors(&self, from: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs.range((from, 0)..(from + 1, 0)).map(|&(_, j)| j)
    }

    pub fn in_degree(&self, to: usize) -> usize {
        self.arcs.iter().filter(|&&(_, j)| j == to).count()
    }

    /// Keeps only the arcs whose endpoints both satisfy `keep`.
    pub fn restricted(&self, keep: impl Fn(usize) -> bool) -> Self {
        Self {
            n: self.n,
            arcs: self
                .arcs
                .iter()
                .copied()
                .filter(|&(i, j)| keep(i) && keep(j))
                .collect(),
        }
    }

    pub(crate) fn adjacency_bits(&self) -> Vec<Vec<u64>> {
        let words = self.n.div_ceil(64);
        let mut rows = alloc::vec![alloc::vec![0u64; words]; self.n];
        for &(i, j) in &self.arcs {
            rows[i][j / 64] |= 1 << (j % 64);
        }
        rows
    }
}

/// Graph product `g1 ∘ g2`: `(i, j)` is an arc iff some `k` has
/// `(i, k) ∈ g1` and `(k, j) ∈ g2`.
pub fn compose(g1: &DirectedGraph, g2: &DirectedGraph) -> Result<DirectedGraph> {
    if g1.n != g2.n {
        return Err(Error::SizeMismatch {
            left: g1.n,
            right: g2.n,
        });
    }
    let arcs = g1
        .arcs()
        .flat_map(|(i, k)| g2.out_neighbors(k).map(move |j| (i, j)))
        .collect();
    Ok(DirectedGraph { n: g1.n, arcs })
}
