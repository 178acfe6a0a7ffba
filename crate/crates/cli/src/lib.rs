//! Library half of the `qq` command-line tool.

pub mod commands;
pub mod config;
pub mod emit;
pub mod error;
