//! File formats and the implementations behind the `ballgrid` subcommands.
//!
//! Every command builds its complete output in memory before anything is
//! written, so a malformed input never leaves a partial file behind.

pub mod coeffs;
pub mod commands;
pub mod mesh_export;
pub mod points;
pub mod verify;

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::error::Error;

/// Errors surfaced by the command-line layer.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Invalid(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Self::Invalid(msg.into())
    }

    /// Process exit status for this error. Verification failures are not
    /// errors and exit with 1 from the report itself.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Shortest decimal string that reads back to the same `f64`; integers are
/// printed without a fractional part and both zeros print as `0`.
pub fn format_num(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let s = format!("{v:?}");
    match s.strip_suffix(".0") {
        Some(t) => t.to_string(),
        None => s,
    }
}

/// Reads a whole file, or standard input for `None` and `"-"`.
pub fn read_input(path: Option<&Path>) -> CliResult<String> {
    let mut buf = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            buf = fs::read_to_string(p).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            })?;
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|source| CliError::Io {
                    path: "<stdin>".into(),
                    source,
                })?;
        }
    }
    Ok(buf)
}

/// Writes `data` in one go, to standard output for `None` and `"-"`.
pub fn write_output(path: Option<&Path>, data: &[u8]) -> CliResult<()> {
    match path {
        Some(p) if p != Path::new("-") => fs::write(p, data).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        _ => {
            let mut out = std::io::stdout().lock();
            out.write_all(data)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
