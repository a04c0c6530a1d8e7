//! File formats and command-line front end for `homspace-core`.

pub mod commands;
pub mod definition;
pub mod error;
pub mod output;

pub use commands::{run, Cli};
pub use definition::{Definition, Space};
pub use error::CliError;
