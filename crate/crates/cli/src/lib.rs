//! Command-line driver and acceptance runner.

pub mod acceptance;
pub mod commands;
