//! Configuration, figure presets, parameter sweeps and CSV/SVG output on top of
//! `vibrolang-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod params;
pub mod run;
pub mod svg;
pub mod table;

pub use config::{load, Command, Config, Format, Job};
pub use error::{CliError, Result};
pub use run::{run, Options};
