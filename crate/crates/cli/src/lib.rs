//! File formats, the workspace and the commands of the `simlab` binary.

pub mod commands;
pub mod error;
pub mod json;
pub mod workspace;

pub use commands::Output;
pub use error::{CliError, Result};
pub use workspace::Workspace;
