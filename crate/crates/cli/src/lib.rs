//! Command-line front end for `semdep`: file formats, DOT and JSON output,
//! and the subcommand implementations behind the `semdep` binary.

pub mod commands;
pub mod document;
pub mod dot;
pub mod formats;

pub use commands::{run, Cli, CliError, Completed};
