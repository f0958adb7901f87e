//! File formats, experiment harness and command-line plumbing around `lire-core`.

pub mod bench;
pub mod cli;
pub mod error;
pub mod io;
pub mod rip;

pub use error::{Result, ToolkitError};
