use alloc::vec::Vec;

use num_traits::ToPrimitive;

use super::lcm_upto;
use crate::model::{FiniteAlgorithm, Multiset, State};
use crate::{Error, Result};

/// The family `q_k^r` of isolated-node orbits used by the two-group
/// schedule, in normalized form: every row is `L`-periodic from index
/// `L − 1`, with `L = lcm(1..=|Q|)`.
///
/// * row 0 starts at the chosen initial state and evolves alone,
/// * row 1 duplicates row 0,
/// * row `k ≥ 2` starts where a node in `q_{k−2}^{2L−1}` lands after
///   hearing itself together with one full period `q_{k−1}^{L..2L−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CherryFamily {
    period: usize,
    rows: Vec<Vec<State>>,
}

impl CherryFamily {
    /// The normalized period `L`.
    pub fn period(&self) -> usize {
        self.period
    }

    /// Largest row index `k` available.
    pub fn k_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// Number of materialized entries per row (`4L`).
    pub fn row_len(&self) -> usize {
        self.rows[0].len()
    }

    pub fn row(&self, k: usize) -> &[State] {
        &self.rows[k]
    }

    /// `q_k^r`; indices past the materialized range fold back by periodicity.
    pub fn get(&self, k: usize, r: usize) -> State {
        let row = &self.rows[k];
        if r < row.len() {
            row[r]
        } else {
            let from = self.period - 1;
            row[from + (r - from) % self.period]
        }
    }
}

fn isolated_step(alg: &dyn FiniteAlgorithm, q: State) -> State {
    let received: Multiset = [alg.message_of(q)].into_iter().collect();
    alg.transition(q, &received)
}

/// Builds rows `0..=k_max`, each with entries `r ∈ [0, 4L)`.
pub fn cherry_family(alg: &dyn FiniteAlgorithm, q00: State, k_max: usize) -> Result<CherryFamily> {
    let size = alg
        .state_count()
        .ok_or_else(|| Error::Unenumerable(alg.name()))?;
    if !alg.contains(q00) {
        return Err(Error::UnknownState(q00));
    }
    if !alg.is_initial(q00) {
        return Err(Error::NotInitial(q00));
    }
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let period = lcm_upto(size as u64)
        .to_usize()
        .ok_or_else(|| Error::InvalidArgument("normalized period does not fit in memory".into()))?;
    let row_len = 4 * period;
    let orbit = |head: State| -> Vec<State> {
        let mut row = Vec::with_capacity(row_len);
        row.push(head);
        while row.len() < row_len {
            let last = *row.last().unwrap();
            row.push(isolated_step(alg, last));
        }
        row
    };
    let mut rows: Vec<Vec<State>> = Vec::with_capacity(k_max + 1);
    rows.push(orbit(q00));
    rows.push(rows[0].clone());
    for k in 2..=k_max {
        let own = rows[k - 2][2 * period - 1];
        let received: Multiset = core::iter::once(own)
            .chain(rows[k - 1][period..2 * period].iter().copied())
            .map(|q| alg.message_of(q))
            .collect();
        rows.push(orbit(alg.transition(own, &received)));
    }
    rows.truncate(k_max + 1);
    Ok(CherryFamily { period, rows })
}
