//! File formats, experiment drivers and the `binloc` command line on top of
//! `binloc-core`.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod format;
pub mod manifest;
pub mod output;
pub mod plot;
pub mod reprfile;
pub mod verify;

pub use error::{CliError, CliResult};
