//! File formats, synthetic data and the `snnreduce` command-line tool built
//! on [`snnreduce_core`].

pub mod cli;
mod error;
pub mod export;
pub mod ingest;
pub mod provenance;
pub mod report;

pub use crate::error::{Error, Result};
pub use snnreduce_core as core;
