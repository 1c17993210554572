//! File formats, synthetic data generators and subcommands for the `merext`
//! command-line tool.

pub mod commands;
pub mod formats;
pub mod generator;
