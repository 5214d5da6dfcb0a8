//! Verification, benchmarking and inspection commands for the group DFT
//! engines.

pub mod commands;
pub mod error;
pub mod fit;
pub mod spec;

pub use error::{CliError, Result};
