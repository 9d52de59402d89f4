//! File formats and command-line driver on top of `syncsmith-core`.

pub mod cli;
pub mod error;
pub mod fsm;
pub mod graph_spec;
pub mod report;

pub use error::{exit, CliError, CliResult};
