//! Command-line front end for `mixknap-core`: instance generation, separation,
//! facet generation, verification, hull inspection and timing.

pub mod commands;
pub mod io;

pub use commands::{run, Cli, EXIT_CUT, EXIT_ERROR, EXIT_INVALID, EXIT_OK};
