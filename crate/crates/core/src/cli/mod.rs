//! Command-line front end: scenario files, subcommands and their reports.

mod commands;
mod config;

pub use commands::{
    cmd_check, cmd_scatter, cmd_simulate, cmd_sweep, write_trace_files, RunConfig, EXIT_ERROR,
    EXIT_OK, EXIT_VIOLATED,
};
pub use config::{dump_config, parse_config, parse_config_str};
