//! Command-line front end for `coorbital-core`.
//!
//! Every command prints one JSON report on stdout. `count` grids and `sweep`
//! can also write a CSV table with `--out`.

// `!(x > 0.0)` style checks are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod csv;
pub mod error;
pub mod format;
pub mod report;
mod run;

pub use config::{Cli, Command, RunConfig};
pub use error::CliError;
pub use run::run;
