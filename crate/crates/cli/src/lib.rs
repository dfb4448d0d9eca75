//! Batch front-end for the isotonic regression estimator toolkit.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod svg;

pub use config::{Command, ExperimentConfig, Overrides, RawConfig};
pub use error::CliError;
