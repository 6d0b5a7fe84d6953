//! Command-line front end: argument parsing, the subcommands and the
//! acceptance checks run by `verify`.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod verify;

pub use error::{CliError, Result};
