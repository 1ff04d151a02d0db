//! Config-driven runs and data export for the polariton simulator.
// NaN-rejecting range checks read as `!(x >= 0.0)`; index loops mirror the matrix algebra.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod run;
pub mod units;
pub mod validate;

pub use config::RunConfig;
pub use error::CliError;
pub use run::{execute, RunSummary};
