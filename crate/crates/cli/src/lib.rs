//! Command-line frontend: parse presentation files, dispatch computations and
//! emit text tables or JSON reports.

pub mod args;
pub mod report;
pub mod run;

pub use args::Cli;
pub use report::Report;
pub use run::{execute, run, run_on_text, CliError};
