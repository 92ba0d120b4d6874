//! Library behind the `lamp` command-line tool.
//!
//! Every verb returns an [`Output`]: a [`RunReport`] for the machine
//! readable formats and a human rendering for the terminal.

pub mod cli;
pub mod commands;
pub mod error;
pub mod report;
pub mod style;

pub use commands::Output;
pub use error::CliError;
pub use report::{Record, RunReport};
