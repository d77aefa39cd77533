//! Command-line front end for `atom-linewidth`.

pub mod commands;
pub mod config;
pub mod error;
pub mod lab;
pub mod svg;
pub mod sweep;

pub use commands::{run, Cli};
pub use error::{CliError, CliResult};
