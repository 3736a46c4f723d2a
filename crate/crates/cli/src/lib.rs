//! Command-line front end for the fanoise pipeline.

pub mod app;
pub mod commands;
pub mod config;
pub mod error;
pub mod validate;

pub use app::run;
pub use config::RunConfig;
pub use error::CliError;
