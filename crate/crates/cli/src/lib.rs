//! Command-line driver for `locrep`: job configuration, the subcommands and
//! the versioned report format.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{exit_code_for, run};
pub use config::{Caps, Format, JobConfig, Subcommand, UnitSelection};
pub use report::{Check, ReportEnvelope};
