//! Configuration, dispatch and reports for the `wirtinger` command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod report;
pub mod run;
pub mod spec;

pub use config::{config_from_value, parse_config, Command, ConfigError, Format, RunConfig, Violation};
pub use report::{ReportDocument, ResultEntry};
pub use run::{run, RunError, TOOL_VERSION};
