//! Command-line front end for the `qv-core` library: flag parsing, the
//! group-ring file format, and the end-to-end reproduction subcommands.

pub mod cli;
pub mod io;
