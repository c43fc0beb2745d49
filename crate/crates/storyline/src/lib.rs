//! File formats, configuration and subcommands around `storyline-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod manifest;
pub mod plot;

pub use storyline_core as core;
