//! Command-line front end for `biasdyn`: run configuration, file formats,
//! run summaries and the ternary projection used for plotting.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod summary;
pub mod ternary;

pub use config::{parse_config, RunConfig};
pub use error::{CliError, CliResult, ConfigError};
pub use summary::{write_summary, Summary};
pub use ternary::ternary_project;
