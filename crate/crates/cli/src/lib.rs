//! Command-line front end: eigenvalue runs, convergence CSV and
//! reproduction of published tables.

pub mod config;
mod error;
pub mod report;
mod run;
pub mod tables;

pub use config::{Format, RunConfig};
pub use error::{CliError, Result};
pub use report::{emit_convergence_csv, write_convergence_csv, EigenvalueReportFile, MissingState, SeriesPoint, StateRecord};
pub use run::run;
pub use tables::{golden, golden_table, matched_digits, reproduce_table, RowComparison, TableComparison};
