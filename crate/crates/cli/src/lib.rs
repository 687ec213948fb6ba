//! Command-line front end for `fpnfr-core`: project documents, report
//! rendering, the interactive wizard and the `fpnfr` binary.

pub mod app;
pub mod document;
pub mod profiles;
pub mod records;
pub mod report;
pub mod table;
pub mod wizard;

pub use app::{run, Cli, CliError, Command};
