use alloc::vec::Vec;

use super::{ActivationSchedule, DirectedGraph, DynamicGraph};
use crate::{Error, Result};

/// Static directed ring `i → i+1 (mod size)` with a self-loop at every node.
pub fn build_directed_ring(size: usize) -> Result<DynamicGraph> {
    if size < 2 {
        return Err(Error::InvalidArgument(
            "a directed ring needs at least 2 nodes".into(),
        ));
    }
    let arcs = (0..size).flat_map(|i| [(i, i), (i, (i + 1) % size)]);
    DynamicGraph::static_graph(DirectedGraph::from_arcs(size, arcs)?)
}

/// Static ring with arcs in both directions and self-loops.
pub fn build_bidirectional_ring(size: usize) -> Result<DynamicGraph> {
    if size < 3 {
        return Err(Error::InvalidArgument(
            "a bidirectional ring needs at least 3 nodes".into(),
        ));
    }
    let arcs = (0..size).flat_map(|i| [(i, i), (i, (i + 1) % size), ((i + 1) % size, i)]);
    DynamicGraph::static_graph(DirectedGraph::from_arcs(size, arcs)?)
}

/// Activation round of node `node` in the two-group schedule with block
/// length `block`.
pub fn two_group_start_round(block: usize, node: usize) -> usize {
    node % block + 2
}

/// Closed-form arc predicate of the two-group schedule on `2·block` nodes.
///
/// Groups are `A = [0, block)` and `B = [block, 2·block)`. Rounds come in
/// blocks of `block` rounds; in blocks `≡ 0 (mod 4)` every node of `A`
/// sends to the `B` node whose offset matches the round, in blocks
/// `≡ 2 (mod 4)` every `B` node sends to the matching `A` node, and odd
/// blocks carry self-loops only. Nothing touches a node before its start.
pub fn two_group_arc_present(block: usize, from: usize, to: usize, round: usize) -> bool {
    let (i, j, t, l) = (from, to, round, block);
    if round == 0 || t < 2 + (i % l).max(j % l) {
        return false;
    }
    let phase = ((t - 1) / l) % 4;
    let slot = (t - 1) % l;
    i == j || (phase == 0 && i < l && j == l + slot) || (phase == 2 && i >= l && j == slot)
}

/// Two-group dynamic graph on `2·block` nodes, as an explicit prefix of
/// `4·block` rounds followed by one `4·block`-round period.
pub fn build_two_group_schedule(block: usize) -> Result<DynamicGraph> {
    if block == 0 {
        return Err(Error::InvalidArgument(
            "block length must be positive".into(),
        ));
    }
    let n = 2 * block;
    let round_graph = |t: usize| -> Result<DirectedGraph> {
        let arcs = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| two_group_arc_present(block, i, j, t));
        DirectedGraph::from_arcs(n, arcs)
    };
    let prefix = (1..=4 * block)
        .map(round_graph)
        .collect::<Result<Vec<_>>>()?;
    let period = (4 * block + 1..=8 * block)
        .map(round_graph)
        .collect::<Result<Vec<_>>>()?;
    let schedule =
        ActivationSchedule::new((0..n).map(|i| two_group_start_round(block, i)).collect())?;
    DynamicGraph::new(n, prefix, period, schedule)
}
