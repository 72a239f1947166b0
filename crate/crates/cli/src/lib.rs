//! Command-line driver for `polygen-core`.
//!
//! Every command reads a [`config::RunConfig`] (or a preset name), runs the
//! engine, and writes CSV, JSON or SVG files atomically into the output
//! directory.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;

pub use error::{CliError, CliResult};
