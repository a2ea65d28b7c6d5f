//! Reproduction manifests written next to every CSV.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub command: String,
    /// Arguments after the program name; `binloc replay` runs them again.
    pub argv: Vec<String>,
    /// Every parameter after defaults and profiles were resolved.
    pub parameters: serde_json::Value,
    pub master_seed: Option<u64>,
    pub tool_version: String,
    pub outputs: Vec<PathBuf>,
}

impl ExperimentManifest {
    pub fn new(command: &str, argv: &[String], parameters: serde_json::Value, master_seed: Option<u64>) -> Self {
        Self {
            command: command.into(),
            argv: argv.to_vec(),
            parameters,
            master_seed,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }
}

/// `out.csv` -> `out.manifest.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("manifest.json")
}
