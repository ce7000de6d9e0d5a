//! Command-line front end for `cimmino-core`.
//!
//! Every command reads one JSON input file (see [`input::Input`]) and writes
//! JSON lines or CSV. Exit codes: 0 success, 2 invalid input, 3 pole,
//! 4 failed check or tolerance, 5 singular matrix.

pub mod commands;
pub mod error;
pub mod formats;
pub mod input;
pub mod output;
pub mod verify;

pub use commands::{run, Command, Outcome, RunConfig};
pub use error::CliError;
