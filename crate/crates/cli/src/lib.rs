//! Command-line front end: matrix-tuple files, JSON/CSV reports, the
//! consistency suites and the acceptance criteria.

pub mod cli;
pub mod error;
pub mod io;
pub mod report;
pub mod suite;

pub use cli::{run, run_with};
pub use error::CliError;
