//! Command-line companion to `capmon-core`: file formats, configuration
//! loading, and the six subcommands (simulate, predict, estimate, sweep,
//! assess, report).
//!
//! The binary in `main.rs` is a thin wrapper over [`run::run`]; everything
//! else lives here so integration tests can drive the same code paths.

pub mod cli;
pub mod config;
pub mod csvio;
pub mod error;
pub mod report;
pub mod run;
