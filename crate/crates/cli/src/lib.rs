//! Command-line front end for `qfisher`: scenario files in, tables and
//! reports out.

pub mod commands;
pub mod error;
pub mod scenario;
pub mod suite;
pub mod table;

pub use error::{CliError, Result};
