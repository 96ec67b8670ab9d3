//! Library side of the command-line front end: config parsing, CSV and SVG
//! emission, and the subcommand drivers. The `pillarpl` binary is a thin
//! argument parser over [`runner`].

pub mod config;
pub mod csvio;
pub mod runner;
pub mod svg;

pub use runner::{CliError, RunArgs};
