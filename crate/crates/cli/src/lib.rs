//! Command-line front end for `iterasym-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
