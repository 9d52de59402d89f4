use alloc::vec::Vec;

use super::{
    equality, Adversary, Cell, Construction, CounterexampleReport, Witness,
    RING_PREFIX_EXTRA_ROUNDS,
};
use crate::graph::{build_bidirectional_ring, build_directed_ring};
use crate::model::{default_min_suffix, Initialization, State};
use crate::sequence::{find_period_pair, find_period_second_order, pair_tapes, second_order_tape};
use crate::{Error, Result};

impl Adversary<'_> {
    /// Directed ring of one period `L` of the second-order sequence seeded by
    /// `(q0, q1)`, node `i` starting in `q^{i+ℓ}`. Node `i` then holds
    /// `q^{i+ℓ+t}` at round `t`, so each node is exactly one round ahead of
    /// its predecessor forever.
    ///
    /// A period of 1 is unrolled to a ring of 2 nodes.
    pub fn forge_directed_ring(
        &self,
        q0: State,
        q1: State,
        periods: usize,
    ) -> Result<CounterexampleReport> {
        self.enumerable()?;
        let (q0, q1) = (self.seed(q0)?, self.seed(q1)?);
        if periods == 0 {
            return Err(Error::InvalidArgument(
                "at least one period must be simulated".into(),
            ));
        }
        let cert = find_period_second_order(self.alg, q0, q1)?;
        let size = cert.period.max(2);
        self.within_budget(size)?;
        let ell = cert.ell;
        let horizon = periods * cert.period;
        let tape = second_order_tape(self.alg, q0, q1, size + ell + horizon)?;
        let graph = build_directed_ring(size)?;
        let init: Vec<State> = (0..size).map(|i| tape.get(i + ell)).collect();

        let (trace, checked) = self.simulate_and_compare(
            &graph,
            &init,
            Initialization::SelfStabilizing,
            horizon,
            |i, t| Some(tape.get(i + ell + t)),
        )?;
        let witnesses: Vec<Witness> = (0..horizon)
            .map(|t| equality(&trace, "ring-shift", Cell::new(1, t), Cell::new(0, t + 1)))
            .collect();
        let min_suffix = default_min_suffix(self.alg.period(), size).min(horizon);
        let verdict = self.conclude(&trace, &witnesses, min_suffix)?;
        Ok(CounterexampleReport {
            construction: Construction::DirectedRing,
            algorithm: self.alg.name(),
            period: self.alg.period(),
            seeds: alloc::vec![("q0", q0), ("q1", q1)],
            graph,
            init,
            initialization: Initialization::SelfStabilizing,
            horizon,
            certificate: cert,
            prediction_match: true,
            predictions_checked: checked,
            witnesses,
            min_suffix,
            verdict,
            trace,
        })
    }

    /// Bidirectional ring of `2L` nodes, even nodes walking the `q` sequence
    /// and odd nodes the `p` sequence of the paired recurrences. Even node
    /// `2k + 2` is one round ahead of even node `2k`.
    ///
    /// A joint period of 1 is unrolled to 2 so the ring has 4 nodes.
    pub fn forge_bidirectional_ring(
        &self,
        p0: State,
        q0: State,
        q1: State,
        periods: usize,
    ) -> Result<CounterexampleReport> {
        self.enumerable()?;
        let (p0, q0, q1) = (self.seed(p0)?, self.seed(q0)?, self.seed(q1)?);
        if periods == 0 {
            return Err(Error::InvalidArgument(
                "at least one period must be simulated".into(),
            ));
        }
        let cert = find_period_pair(self.alg, p0, q0, q1)?;
        let half = cert.period.max(2);
        let size = 2 * half;
        self.within_budget(size)?;
        let ell = cert.ell;
        let horizon = periods * cert.period;
        let (p, q, _) = pair_tapes(self.alg, p0, q0, q1, half + ell + horizon)?;
        let graph = build_bidirectional_ring(size)?;
        let predict = |i: usize, t: usize| {
            let idx = ell + i / 2 + t;
            if i.is_multiple_of(2) {
                q.get(idx)
            } else {
                p.get(idx)
            }
        };
        let init: Vec<State> = (0..size).map(|i| predict(i, 0)).collect();

        let (trace, checked) = self.simulate_and_compare(
            &graph,
            &init,
            Initialization::SelfStabilizing,
            horizon,
            |i, t| Some(predict(i, t)),
        )?;
        let witnesses: Vec<Witness> = (0..horizon)
            .map(|t| equality(&trace, "even-shift", Cell::new(2, t), Cell::new(0, t + 1)))
            .collect();
        let min_suffix = default_min_suffix(self.alg.period(), size).min(horizon);
        let verdict = self.conclude(&trace, &witnesses, min_suffix)?;
        Ok(CounterexampleReport {
            construction: Construction::BidirectionalRing,
            algorithm: self.alg.name(),
            period: self.alg.period(),
            seeds: alloc::vec![("p0", p0), ("q0", q0), ("q1", q1)],
            graph,
            init,
            initialization: Initialization::SelfStabilizing,
            horizon,
            certificate: cert,
            prediction_match: true,
            predictions_checked: checked,
            witnesses,
            min_suffix,
            verdict,
            trace,
        })
    }

    /// Directed ring of arbitrary size `n ≥ 4` seeded like
    /// [`Adversary::forge_directed_ring`]. Up to round `n − 1`, nodes
    /// `t..n` cannot tell this ring from the one-period ring, which forces
    /// `s_{n−1}(n−3) = s_{n−2}(n−2)` and rules out synchronization by round
    /// `n − 3`.
    pub fn forge_ring_prefix(
        &self,
        q0: State,
        q1: State,
        n: usize,
    ) -> Result<CounterexampleReport> {
        self.enumerable()?;
        let (q0, q1) = (self.seed(q0)?, self.seed(q1)?);
        if n < 4 {
            return Err(Error::InvalidArgument(
                "ring size must be at least 4".into(),
            ));
        }
        self.within_budget(n)?;
        let cert = find_period_second_order(self.alg, q0, q1)?;
        let ell = cert.ell;
        let horizon = n + RING_PREFIX_EXTRA_ROUNDS;
        let tape = second_order_tape(self.alg, q0, q1, ell + 2 * n)?;
        let graph = build_directed_ring(n)?;
        let init: Vec<State> = (0..n).map(|i| tape.get(i + ell)).collect();

        let (trace, checked) = self.simulate_and_compare(
            &graph,
            &init,
            Initialization::SelfStabilizing,
            horizon,
            |j, t| (t == 0 || (t < n && j >= t)).then(|| tape.get(ell + t + j)),
        )?;
        let witnesses = alloc::vec![
            equality(
                &trace,
                "prefix-collision",
                Cell::new(n - 1, n - 3),
                Cell::new(n - 2, n - 2)
            ),
            Witness::NoEarlySync { up_to_round: n - 3 },
        ];
        let min_suffix = horizon - (n - 3);
        let verdict = self.conclude(&trace, &witnesses, min_suffix)?;
        Ok(CounterexampleReport {
            construction: Construction::RingPrefix,
            algorithm: self.alg.name(),
            period: self.alg.period(),
            seeds: alloc::vec![("q0", q0), ("q1", q1)],
            graph,
            init,
            initialization: Initialization::SelfStabilizing,
            horizon,
            certificate: cert,
            prediction_match: true,
            predictions_checked: checked,
            witnesses,
            min_suffix,
            verdict,
            trace,
        })
    }
}
