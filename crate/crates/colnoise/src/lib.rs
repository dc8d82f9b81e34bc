//! File formats, run manifests and the `colnoise` command line tool built on
//! [`colnoise_core`].

pub mod cli;
pub mod error;
pub mod format;
pub mod manifest;
pub mod presets;

pub use colnoise_core as core;
pub use error::{CliError, Result};
