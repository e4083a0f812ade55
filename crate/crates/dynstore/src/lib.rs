//! File formats, reports and the command-line front end for `dynstore-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod oracle_check;
pub mod output;
pub mod replicas;

pub use error::{CliError, CliResult};
