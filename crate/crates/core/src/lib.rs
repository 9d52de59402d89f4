//! Bounded-memory clock synchronization in anonymous synchronous networks.
//!
//! The crate models agents as finite-state programs that, in every round,
//! broadcast a message derived from their state, collect the multiset of
//! messages sent by their in-neighbours in the round's communication graph,
//! and step to a new state. On top of that execution model it provides:
//!
//! * [`graph`]: directed-graph products, interval products, dynamic diameter
//!   and the eventually-periodic dynamic graphs used by the adversary.
//! * [`sequence`]: the recurrent state sequences driving the counterexamples,
//!   with minimal ultimate-periodicity certificates.
//! * [`adversary`]: builders of executions in which a given bounded-memory
//!   algorithm provably never reaches mod-P synchronization.
//! * [`bounds`]: the state and time lower bounds, with the supporting number
//!   theory (`lcm(1..k)`, prime counting, Chebyshev-type estimates).
//! * [`zoo`]: reference algorithms and a table-driven algorithm carrier.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod adversary;
pub mod bounds;
mod error;
pub mod graph;
pub mod model;
pub mod sequence;
pub mod zoo;

pub use error::{Error, Result};
