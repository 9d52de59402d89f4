use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{equality, Adversary, Cell, Construction, CounterexampleReport, Witness};
use crate::graph::build_two_group_schedule;
use crate::model::{Initialization, State};
use crate::sequence::{cherry_family, lcm_upto, PeriodicityCertificate};
use crate::{Error, Result};

impl Adversary<'_> {
    /// Two groups of `L = lcm(1..=|Q|)` nodes on the diffusive-start
    /// two-group schedule, every node starting in `q00 ∈ Q0`.
    ///
    /// At every round `2kL`, node `i` sits at `q_{k+λ}^{2L−1−(i mod L)}` of
    /// the cherry family, with `λ = −1` exactly when `(i ≥ L) xor (k odd)`.
    /// In particular `s_0(4kL) = s_1(4kL + 1)` while both nodes are
    /// supposed to agree at round `4kL`.
    pub fn forge_two_group(&self, q00: State, k_max: usize) -> Result<CounterexampleReport> {
        self.enumerable()?;
        let q00 = self.seed(q00)?;
        if k_max < 2 {
            return Err(Error::InvalidArgument("k_max must be at least 2".into()));
        }
        let size = self.alg.state_count().expect("enumerable");
        let block_big = lcm_upto(size as u64);
        let nodes_big: BigUint = &block_big * 2u32;
        if nodes_big > BigUint::from(self.node_budget) {
            return Err(Error::SizeLimit {
                nodes: format!("{nodes_big}"),
                budget: self.node_budget,
            });
        }
        let block = block_big.to_usize().expect("within budget");

        let family = cherry_family(self.alg, q00, k_max)?;
        let normalized = PeriodicityCertificate {
            ell: block,
            period: block,
        };
        for k in 0..=k_max {
            if !normalized.verify(family.row(k)) {
                return Err(Error::TheoremViolation(format!(
                    "cherry row {k} is not {block}-periodic from index {}",
                    block - 1
                )));
            }
        }

        let graph = build_two_group_schedule(block)?;
        let n = graph.n();
        let init = alloc::vec![q00; n];
        let horizon = 2 * k_max * block + 1;
        let predict = |i: usize, t: usize| -> Option<State> {
            if t == 0 || !t.is_multiple_of(2 * block) {
                return None;
            }
            let k = t / (2 * block);
            let lag = (i >= block) != (k % 2 == 1);
            let row = if lag { k - 1 } else { k };
            Some(family.get(row, 2 * block - 1 - i % block))
        };
        let (trace, checked) =
            self.simulate_and_compare(&graph, &init, Initialization::Standard, horizon, predict)?;

        let mut witnesses = Vec::new();
        let mut k = 1;
        while 4 * k * block < horizon {
            let t = 4 * k * block;
            let w = equality(&trace, "group-shift", Cell::new(0, t), Cell::new(1, t + 1));
            if let Witness::StateEquality { state, .. } = w {
                let expected = family.get(2 * k, 2 * block - 1);
                if state != expected {
                    return Err(Error::PredictionMismatch {
                        node: 0,
                        round: t,
                        predicted: expected,
                        simulated: state,
                    });
                }
            }
            witnesses.push(w);
            k += 1;
        }
        let last_witness_round = 4 * (k - 1) * block;
        let min_suffix = horizon - last_witness_round;
        let verdict = self.conclude(&trace, &witnesses, min_suffix)?;
        Ok(CounterexampleReport {
            construction: Construction::TwoGroup,
            algorithm: self.alg.name(),
            period: self.alg.period(),
            seeds: alloc::vec![("q00", q00)],
            graph,
            init,
            initialization: Initialization::Standard,
            horizon,
            certificate: normalized,
            prediction_match: true,
            predictions_checked: checked,
            witnesses,
            min_suffix,
            verdict,
            trace,
        })
    }
}
