//! Library side of the `phasecli` binary: configuration, the subcommands
//! and SVG output.

pub mod commands;
pub mod config;
pub mod plot;
pub mod verify;

/// Environment variable holding the worker-thread count.
pub const WORKERS_ENV: &str = "PHASECLI_WORKERS";
