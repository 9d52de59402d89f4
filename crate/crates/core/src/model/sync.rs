use alloc::format;

use super::Trace;
use crate::{Error, Result};

/// Outcome of the mod-P synchronization check over a finite trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyncVerdict {
    /// `clock_i(t) ≡ t + offset (mod P)` for every node and every
    /// `t ∈ [t0, T]`, with `t0` minimal.
    Synchronized { t0: usize, offset: u64 },
    /// The latest round (scanning back from the horizon) at which some node
    /// breaks the congruence fixed by the final column.
    NotSynchronized {
        node: usize,
        round: usize,
        expected: u64,
        actual: u64,
    },
}

impl SyncVerdict {
    pub fn is_synchronized(&self) -> bool {
        matches!(self, SyncVerdict::Synchronized { .. })
    }
}

/// Default suffix length `2·P·n` required before a finite trace counts as
/// synchronized.
pub fn default_min_suffix(period: u64, n: usize) -> usize {
    2 * period as usize * n
}

/// Decides whether the trace ends in a synchronized suffix of at least
/// `min_suffix` rounds, i.e. whether some `t0 ≤ T − min_suffix` and offset
/// `c` make every clock congruent to `t + c` on `[t0, T]`.
///
/// The valid `t0` form an upward-closed set and `c` is pinned by the last
/// column, so a single backward scan finds the minimal `t0`.
pub fn check_mod_p_sync(trace: &Trace, period: u64, min_suffix: usize) -> Result<SyncVerdict> {
    if period < 2 {
        return Err(Error::InvalidArgument(format!(
            "period {period} must exceed 1"
        )));
    }
    if min_suffix == 0 {
        return Err(Error::InvalidArgument(
            "min_suffix must be at least 1".into(),
        ));
    }
    let horizon = trace.horizon();
    if horizon < min_suffix {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} is shorter than the required suffix {min_suffix}"
        )));
    }
    let expected_at = |t: usize, offset: u64| ((t as u64 % period) + offset) % period;
    let last = trace.clock(0, horizon) % period;
    let offset = (last + period - horizon as u64 % period) % period;

    let mut obstruction = None;
    'scan: for t in (0..=horizon).rev() {
        let expected = expected_at(t, offset);
        for (node, &clock) in trace.clock_column(t).iter().enumerate() {
            if clock % period != expected {
                obstruction = Some((node, t, expected, clock));
                break 'scan;
            }
        }
    }
    let t0 = obstruction.map_or(0, |(_, t, _, _)| t + 1);
    if t0 <= horizon - min_suffix {
        return Ok(SyncVerdict::Synchronized { t0, offset });
    }
    let (node, round, expected, actual) =
        obstruction.expect("t0 > 0 implies an obstruction was found");
    Ok(SyncVerdict::NotSynchronized {
        node,
        round,
        expected,
        actual,
    })
}
