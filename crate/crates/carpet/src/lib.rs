//! File formats, job configuration, the command-line runner and
//! thread-parallel rendering on top of `carpet-core`.

pub mod config;
pub mod figures;
pub mod formats;
pub mod jobs;
pub mod parallel;
pub mod parse;

pub use config::{Command, JobConfig};
pub use jobs::{run, JobError, Output};
