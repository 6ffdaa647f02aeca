//! Library side of the command-line driver; the binary in `main.rs` is a
//! thin wrapper so integration tests can call the same entry points.

// Guards written as `!(x > 0.0)` are deliberate: they reject NaN together
// with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod runner;
pub mod svg;

use std::fmt;

/// CLI-level failures, each mapped to a process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or config file (exit 2).
    Config(String),
    /// Invalid or degenerate geometry (exit 3).
    Geometry(String),
    /// Filesystem failure, with the offending path (exit 4).
    Io(String, String),
    /// Nothing to write (exit 5).
    EmptyOutput,
    /// Anything else from the numeric core (exit 1).
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Geometry(_) => 3,
            CliError::Io(..) => 4,
            CliError::EmptyOutput => 5,
            CliError::Internal(_) => 1,
        }
    }

    /// Short machine-readable tag for sweep-row flags.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Geometry(_) => "geometry",
            CliError::Io(..) => "io",
            CliError::EmptyOutput => "empty",
            CliError::Internal(_) => "internal",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Geometry(msg) => write!(f, "geometry error: {msg}"),
            CliError::Io(path, msg) => write!(f, "io error on {path}: {msg}"),
            CliError::EmptyOutput => write!(f, "refusing to write empty output"),
            CliError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<patchmin::Error> for CliError {
    fn from(e: patchmin::Error) -> Self {
        match e {
            patchmin::Error::InvalidGeometry(_)
            | patchmin::Error::DegenerateNormal
            | patchmin::Error::CornerMismatch { .. }
            | patchmin::Error::InvalidBlending => CliError::Geometry(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}
