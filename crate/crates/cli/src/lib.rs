//! Instance format, reports and subcommands behind the `qlab` binary.

pub mod commands;
pub mod format;
pub mod report;
