use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
    Md,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] milnor_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Lifts any library error.
pub fn core<E: Into<milnor_core::Error>>(e: E) -> CliError {
    CliError::Core(e.into())
}

/// What a command produced.
pub struct Output {
    pub body: String,
    /// A mismatch or an uncertified result.
    pub failed: bool,
    /// `--output` names the body's destination (false when the command
    /// already wrote its artifact there).
    pub to_output: bool,
}

impl Output {
    pub fn ok(body: String) -> Self {
        Output {
            body,
            failed: false,
            to_output: true,
        }
    }
}

pub fn emit(body: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, body),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            if !body.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            out.flush()
        }
    }
}

pub fn csv_rows<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)?)
}

pub fn unsupported(command: &str, f: Format) -> CliError {
    CliError::Usage(format!("{command} does not support --format {f:?}").to_lowercase())
}
