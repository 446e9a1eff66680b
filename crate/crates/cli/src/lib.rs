//! Command-line front end for `sturmfib`: config loading, the subcommands
//! and their JSON/CSV output.

pub mod commands;
pub mod config;
pub mod parse;
pub mod render;

pub use commands::{cmd_analyze, cmd_generate, cmd_periodic, cmd_verify, cmd_word, CliError, Outcome};
pub use config::{parse_config, ConfigError, Overrides, RunConfig};
