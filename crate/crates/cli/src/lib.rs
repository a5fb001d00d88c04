//! Library half of the `lrt` binary: argument definitions, config files,
//! data input, CSV output and the four commands.

pub mod args;
mod commands;
pub mod config;
pub mod data;
mod error;
pub mod output;

pub use commands::{bias_table, diagnose, run, simulate, stat};
pub use error::{exit, CliError, Result};
