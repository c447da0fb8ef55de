//! Command-line front end for the bipolar-scale operators.

pub mod commands;
pub mod config;
pub mod error;
pub mod expr;
pub mod registry;
pub mod report;

pub use commands::{run, Cli};
pub use error::{CliError, CliResult};
