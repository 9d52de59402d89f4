//! State and round lower bounds, and the number theory behind them.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::{Error, Result};

/// The Chebyshev-type constant used by the bounds.
pub const CHEBYSHEV_CONSTANT: f64 = 1.11;

/// Sieve of Eratosthenes up to `limit`, with prime counts and the running
/// sum `θ(k) = Σ_{p ≤ k} ln p`. Built once, read-only afterwards.
#[derive(Debug, Clone)]
pub struct Sieve {
    limit: usize,
    primes: Vec<u64>,
    /// `pi[k]` = number of primes ≤ k.
    pi: Vec<u32>,
    /// `theta[k]` = Σ ln p over primes p ≤ k.
    theta: Vec<f64>,
}

impl Sieve {
    pub fn new(limit: usize) -> Self {
        let mut composite = alloc::vec![false; limit + 1];
        let mut primes = Vec::new();
        let mut pi = alloc::vec![0u32; limit + 1];
        let mut theta = alloc::vec![0f64; limit + 1];
        let mut count = 0;
        let mut sum = 0.0;
        for k in 2..=limit {
            if !composite[k] {
                primes.push(k as u64);
                count += 1;
                sum += libm::log(k as f64);
                let mut m = k * k;
                while m <= limit {
                    composite[m] = true;
                    m += k;
                }
            }
            pi[k] = count;
            theta[k] = sum;
        }
        Self {
            limit,
            primes,
            pi,
            theta,
        }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Primes up to the limit, increasing.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn primes_upto(&self, k: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= k);
        &self.primes[..end]
    }

    pub fn prime_count(&self, k: u64) -> u64 {
        assert!(
            k as usize <= self.limit,
            "{k} beyond sieve limit {}",
            self.limit
        );
        self.pi[k as usize] as u64
    }

    /// `ln lcm(1..=k) = Σ_p e_p ln p` with `e_p = max{e : p^e ≤ k}`.
    ///
    /// Primes above `√k` all have `e_p = 1`; their contribution is read off
    /// the running `θ(k)`, and only the primes below `√k` are expanded.
    pub fn log_lcm_upto(&self, k: u64) -> f64 {
        assert!(
            k as usize <= self.limit,
            "{k} beyond sieve limit {}",
            self.limit
        );
        let mut total = self.theta[k as usize];
        for &p in &self.primes {
            if p * p > k {
                break;
            }
            total += (prime_exponent(p, k) - 1) as f64 * libm::log(p as f64);
        }
        total
    }

    /// `π(k) ≤ 1.11·k/ln k` and `ln lcm(1..=k) ≤ 1.11·k`.
    pub fn chebyshev_check(&self, k: u64) -> bool {
        let kf = k as f64;
        let pi_ok = self.prime_count(k) as f64 <= CHEBYSHEV_CONSTANT * kf / libm::log(kf);
        pi_ok && self.log_lcm_upto(k) <= CHEBYSHEV_CONSTANT * kf
    }
}

/// `max{e : p^e ≤ k}` by repeated integer multiplication.
pub fn prime_exponent(p: u64, k: u64) -> u32 {
    let mut e = 0;
    let mut power = 1u64;
    while let Some(next) = power.checked_mul(p) {
        if next > k {
            break;
        }
        power = next;
        e += 1;
    }
    e
}

/// Number of primes `≤ k`.
pub fn prime_count(k: u64) -> u64 {
    Sieve::new(k as usize).prime_count(k)
}

/// `lcm(1..=k) = Π_{p ≤ k} p^{e_p}`, with the exponents found by integer
/// powering.
pub fn lcm_upto_factored(k: u64) -> BigUint {
    lcm_factored_with(&Sieve::new(k as usize), k)
}

/// [`lcm_upto_factored`] against a prebuilt sieve covering `k`.
pub fn lcm_factored_with(sieve: &Sieve, k: u64) -> BigUint {
    let mut result = BigUint::from(1u32);
    // batch prime powers into a machine word before touching the bignum
    let mut word = 1u64;
    for &p in sieve.primes_upto(k) {
        let power = p.pow(prime_exponent(p, k));
        match word.checked_mul(power) {
            Some(w) => word = w,
            None => {
                result *= word;
                word = power;
            }
        }
    }
    result *= word;
    result
}

/// `ln lcm(1..=k)` via the prime-power sum.
pub fn log_lcm_upto(k: u64) -> f64 {
    Sieve::new(k as usize).log_lcm_upto(k)
}

/// Both Chebyshev-type estimates at `k ≥ 2`.
pub fn chebyshev_check(k: u64) -> bool {
    Sieve::new(k as usize).chebyshev_check(k)
}

/// `1 + ⌊ln(n/2) / 1.11⌋`: states needed by any bounded-memory synchronizer
/// on dynamic networks of at most `n` nodes.
pub fn dynamic_state_lower_bound(n: u64) -> u64 {
    let x = libm::log(n as f64 / 2.0) / CHEBYSHEV_CONSTANT;
    1 + libm::floor(x.max(0.0)) as u64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub n: u64,
    /// `n + 1` states for self-stabilizing synchronization on static
    /// strongly connected networks of at most `n` nodes.
    pub self_stab_state_lb: u64,
    /// `n − 2` rounds, same class.
    pub self_stab_time_lb: u64,
    pub dynamic_state_lb: u64,
    /// `π(n)`.
    pub pi_n: u64,
    /// `ln lcm(1..=n)`.
    pub log_lcm: f64,
}

pub fn lower_bounds(n: u64) -> Result<BoundReport> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "n = {n} must be at least 4"
        )));
    }
    let sieve = Sieve::new(n as usize);
    Ok(BoundReport {
        n,
        self_stab_state_lb: n + 1,
        self_stab_time_lb: n - 2,
        dynamic_state_lb: dynamic_state_lower_bound(n),
        pi_n: sieve.prime_count(n),
        log_lcm: sieve.log_lcm_upto(n),
    })
}
