//! Command-line front end: parses flags, runs scans from `jc-core` and writes
//! CSV tables and standalone SVG plots.

pub mod args;
pub mod csv;
pub mod run;
pub mod svg;

pub use args::{parse_args, Command, RunConfig};
pub use run::{run, RunError};
