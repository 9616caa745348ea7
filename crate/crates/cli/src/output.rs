//! Output plumbing: the self-describing JSON envelope and the writer.
//!
//! Runs are byte-identical for identical config and seed, so nothing
//! time- or host-dependent goes in the body; wall time is stderr-only.

use crate::error::{CliError, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;
use std::fs;
use std::path::PathBuf;

/// Output serialization format. CSV is only available for tabular reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn parse_name(name: &str) -> Result<Format> {
        match name {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::Config(format!(
                "unknown format `{other}`, expected json or csv"
            ))),
        }
    }

    /// Rejects `--format csv` for commands without a tabular shape.
    pub fn json_only(self, command: &str) -> Result<()> {
        match self {
            Format::Json => Ok(()),
            Format::Csv => Err(CliError::Config(format!(
                "`{command}` has no tabular form; use --format json"
            ))),
        }
    }
}

/// Reproducibility wrapper written by every non-report command: the
/// resolved configuration, the seed, and the tool version ride along with
/// the result.
#[derive(Serialize)]
pub struct Envelope {
    pub schema: u32,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub config: Value,
    pub result: Value,
}

impl Envelope {
    pub fn new(command: &'static str, seed: u64, config: Value, result: Value) -> Self {
        Envelope {
            schema: 1,
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            config,
            result,
        }
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope serializes")
    }
}

/// Writes the body to `--out` or stdout, normalized to exactly one
/// trailing newline either way.
pub fn write_output(out: Option<&PathBuf>, body: &str) -> Result<()> {
    let body = body.trim_end_matches('\n');
    match out {
        None => {
            println!("{body}");
            Ok(())
        }
        Some(path) => fs::write(path, format!("{body}\n"))
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
    }
}
