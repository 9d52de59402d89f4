//! Recurrent state sequences and their ultimate-periodicity certificates.

mod cherry;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::model::{FiniteAlgorithm, Multiset, State};
use crate::{Error, Result};

pub use cherry::{cherry_family, CherryFamily};

/// Which recurrence produced a [`SequenceTape`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TapeGenerator {
    /// `q^{r+2} = τ(q^{r+1}, {σ(q^{r+1}), σ(q^r)})`.
    SecondOrder { q0: State, q1: State },
    /// The `p` half of the paired bidirectional-ring recurrence.
    PairP { p0: State, q0: State, q1: State },
    /// The `q` half of the paired bidirectional-ring recurrence.
    PairQ { p0: State, q0: State, q1: State },
    /// Row `k` of a cherry family.
    CherryRow { k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTape {
    pub values: Vec<State>,
    pub generator: TapeGenerator,
}

impl SequenceTape {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, r: usize) -> State {
        self.values[r]
    }
}

/// `(ℓ, L)` such that `x_{r+L} = x_r` for every `r ≥ ℓ − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PeriodicityCertificate {
    pub ell: usize,
    pub period: usize,
}

impl PeriodicityCertificate {
    /// Index from which the sequence is periodic (`ℓ − 1`).
    pub fn periodic_from(&self) -> usize {
        self.ell - 1
    }

    /// Replays the certificate on a finite tape: `values[r + L] = values[r]`
    /// for every `r ∈ [ℓ − 1, len − L)`.
    pub fn verify<T: PartialEq>(&self, values: &[T]) -> bool {
        if self.ell == 0 || self.period == 0 {
            return false;
        }
        (self.periodic_from()..values.len().saturating_sub(self.period))
            .all(|r| values[r + self.period] == values[r])
    }
}

/// Tail length `start` and cycle length `len` of the orbit of a
/// deterministic step function: `x_start` is the first element that recurs,
/// and it recurs after exactly `len` steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cycle {
    pub start: usize,
    pub len: usize,
}

/// Cycle detection with a first-occurrence map. Gives up after `max_steps`
/// distinct elements.
pub fn detect_cycle<S: Ord + Clone>(
    seed: S,
    mut step: impl FnMut(&S) -> S,
    max_steps: usize,
) -> Option<Cycle> {
    let mut seen = BTreeMap::new();
    let mut current = seed;
    for index in 0..=max_steps {
        if let Some(&first) = seen.get(&current) {
            return Some(Cycle {
                start: first,
                len: index - first,
            });
        }
        let next = step(&current);
        seen.insert(current, index);
        current = next;
    }
    None
}

/// Minimal certificate of a first-order recurrence `x_{t+1} = f(x_t)`.
pub fn find_period_first_order<T: Ord + Clone>(
    x0: T,
    f: impl FnMut(&T) -> T,
    max_steps: usize,
) -> Option<PeriodicityCertificate> {
    detect_cycle(x0, f, max_steps).map(|c| PeriodicityCertificate {
        ell: c.start + 1,
        period: c.len,
    })
}

fn require_state(alg: &dyn FiniteAlgorithm, q: State) -> Result<()> {
    if alg.contains(q) {
        Ok(())
    } else {
        Err(Error::UnknownState(q))
    }
}

fn step_with(alg: &dyn FiniteAlgorithm, own: State, heard: &[State]) -> State {
    let received: Multiset = heard.iter().map(|&q| alg.message_of(q)).collect();
    alg.transition(own, &received)
}

fn second_order_step(alg: &dyn FiniteAlgorithm, prev: State, cur: State) -> State {
    step_with(alg, cur, &[cur, prev])
}

/// First `length` terms of `q^{r+2} = τ(q^{r+1}, {σ(q^{r+1}), σ(q^r)})`.
pub fn second_order_tape(
    alg: &dyn FiniteAlgorithm,
    q0: State,
    q1: State,
    length: usize,
) -> Result<SequenceTape> {
    require_state(alg, q0)?;
    require_state(alg, q1)?;
    if length < 2 {
        return Err(Error::InvalidArgument(
            "a second-order tape needs length ≥ 2".into(),
        ));
    }
    let mut values = Vec::with_capacity(length);
    values.extend([q0, q1]);
    while values.len() < length {
        let r = values.len();
        values.push(second_order_step(alg, values[r - 2], values[r - 1]));
    }
    Ok(SequenceTape {
        values,
        generator: TapeGenerator::SecondOrder { q0, q1 },
    })
}

/// Minimal `(ℓ, L)` of the second-order sequence seeded by `(q0, q1)`,
/// found at the first repeated pair `(q^r, q^{r+1})`.
pub fn find_period_second_order(
    alg: &dyn FiniteAlgorithm,
    q0: State,
    q1: State,
) -> Result<PeriodicityCertificate> {
    require_state(alg, q0)?;
    require_state(alg, q1)?;
    let bound = alg
        .state_count()
        .map_or(usize::MAX - 1, |m| m.saturating_mul(m));
    let cycle = detect_cycle((q0, q1), |&(a, b)| (b, second_order_step(alg, a, b)), bound)
        .ok_or_else(|| Error::Unenumerable(alg.name()))?;
    Ok(PeriodicityCertificate {
        ell: cycle.start + 1,
        period: cycle.len,
    })
}

/// The paired sequences
/// `p^{r+1} = τ(p^r, {σ(q^r), σ(p^r), σ(q^{r+1})})` and
/// `q^{r+1} = τ(q^r, {σ(p^{r−1}), σ(q^r), σ(p^r)})` (`r ≥ 1`), seeded with
/// `p^0, q^0, q^1`, each of the given length.
fn pair_values(
    alg: &dyn FiniteAlgorithm,
    p0: State,
    q0: State,
    q1: State,
    length: usize,
) -> (Vec<State>, Vec<State>) {
    let mut p = alloc::vec![p0];
    let mut q = alloc::vec![q0, q1];
    while p.len() < length || q.len() < length {
        // p^r needs q^r; q^{r+1} needs p^r
        if p.len() < q.len() {
            let r = p.len() - 1;
            p.push(step_with(alg, p[r], &[q[r], p[r], q[r + 1]]));
        } else {
            let r = q.len() - 1;
            q.push(step_with(alg, q[r], &[p[r - 1], q[r], p[r]]));
        }
    }
    p.truncate(length);
    q.truncate(length);
    (p, q)
}

/// Paired tapes and the minimal joint certificate of `(p^r, q^r)`.
pub fn pair_tapes(
    alg: &dyn FiniteAlgorithm,
    p0: State,
    q0: State,
    q1: State,
    length: usize,
) -> Result<(SequenceTape, SequenceTape, PeriodicityCertificate)> {
    for q in [p0, q0, q1] {
        require_state(alg, q)?;
    }
    if length < 2 {
        return Err(Error::InvalidArgument("pair tapes need length ≥ 2".into()));
    }
    let cert = find_period_pair(alg, p0, q0, q1)?;
    let (p, q) = pair_values(alg, p0, q0, q1, length);
    let generator_p = TapeGenerator::PairP { p0, q0, q1 };
    let generator_q = TapeGenerator::PairQ { p0, q0, q1 };
    Ok((
        SequenceTape {
            values: p,
            generator: generator_p,
        },
        SequenceTape {
            values: q,
            generator: generator_q,
        },
        cert,
    ))
}

/// Minimal joint certificate of the paired sequences.
///
/// The pair `(p^r, q^r)` alone does not determine its successor (the
/// `q`-recurrence also reads `p^{r−1}`), so the orbit is tracked on
/// `(p^{r−1}, q^r, p^r)` and the certificate is then minimized on the pair
/// sequence itself.
pub fn find_period_pair(
    alg: &dyn FiniteAlgorithm,
    p0: State,
    q0: State,
    q1: State,
) -> Result<PeriodicityCertificate> {
    let p1 = step_with(alg, p0, &[q0, p0, q1]);
    let bound = alg
        .state_count()
        .map_or(usize::MAX - 1, |m| m.saturating_pow(3));
    let cycle = detect_cycle(
        (p0, q1, p1),
        |&(p_prev, q_cur, p_cur)| {
            let q_next = step_with(alg, q_cur, &[p_prev, q_cur, p_cur]);
            let p_next = step_with(alg, p_cur, &[q_cur, p_cur, q_next]);
            (p_cur, q_next, p_next)
        },
        bound,
    )
    .ok_or_else(|| Error::Unenumerable(alg.name()))?;
    // orbit index 0 is r = 1; the pairs are periodic from r = start + 1
    let tail = cycle.start + 1;
    let len = tail + 2 * cycle.len + 1;
    let (p, q) = pair_values(alg, p0, q0, q1, len);
    let pairs: Vec<(State, State)> = p.into_iter().zip(q).collect();
    Ok(minimize_certificate(&pairs, tail, cycle.len))
}

/// Given a tape known to be `period`-periodic from `from` (and long enough to
/// show one full period after `from + period`), returns the minimal
/// certificate.
fn minimize_certificate<T: PartialEq>(
    values: &[T],
    from: usize,
    period: usize,
) -> PeriodicityCertificate {
    let holds = |d: usize, r: usize| values[r + d] == values[r];
    let minimal = (1..=period)
        .filter(|d| period.is_multiple_of(*d))
        .find(|&d| (from..from + period).all(|r| holds(d, r)))
        .unwrap_or(period);
    let mut start = from;
    while start > 0 && holds(minimal, start - 1) {
        start -= 1;
    }
    PeriodicityCertificate {
        ell: start + 1,
        period: minimal,
    }
}

/// `lcm(1, 2, …, a)`, folded one integer at a time.
pub fn lcm_upto(a: u64) -> BigUint {
    LcmPrefixes::new()
        .nth(a.saturating_sub(1) as usize)
        .unwrap_or_else(|| BigUint::from(1u32))
}

/// The sequence `lcm(1..=1), lcm(1..=2), …`.
#[derive(Debug, Clone)]
pub struct LcmPrefixes {
    next: u64,
    acc: BigUint,
}

impl LcmPrefixes {
    pub fn new() -> Self {
        Self {
            next: 1,
            acc: BigUint::from(1u32),
        }
    }
}

impl Default for LcmPrefixes {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for LcmPrefixes {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        let k = self.next;
        let residue: u64 = (&self.acc % k).try_into().expect("residue below k");
        let g = residue.gcd(&k);
        self.acc *= k / g;
        self.next += 1;
        Some(self.acc.clone())
    }
}
