//! Command-line front end for the `dixlab-core` sequence lab: spec-string
//! parsing, configuration, and JSON/CSV/table reports.

pub mod build;
pub mod config;
pub mod error;
pub mod parse;
pub mod report;
pub mod run;

pub use config::{Cli, Command, Flags, Format, RunConfig};
pub use error::CliError;
pub use report::{Outcome, Report};
pub use run::run;
