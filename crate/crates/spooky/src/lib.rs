//! File formats, text reports and the `spooky` command-line runner built
//! on `spooky-core`.

pub mod cli;
pub mod error;
pub mod figure;
pub mod formats;
pub mod report;
pub mod sweep;

pub use cli::{run, RunConfig};
pub use error::CliError;
