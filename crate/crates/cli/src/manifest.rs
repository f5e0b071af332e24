//! Run manifest written next to the CSV outputs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::settings::Settings;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_digest: String,
    pub config: BTreeMap<&'static str, String>,
    pub seed: u64,
    pub workers: usize,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub outputs: Vec<PathBuf>,
}

pub fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

/// Collects output files for one run and records them in the manifest.
pub struct OutputDir {
    dir: PathBuf,
    written: Vec<PathBuf>,
    started: u128,
}

impl OutputDir {
    pub fn create(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new(), started: now_ms() })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> CliResult<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }

    /// Writes `manifest.json` and returns every path produced.
    pub fn finish(mut self, settings: &Settings, workers: usize) -> CliResult<Vec<PathBuf>> {
        let manifest = RunManifest {
            tool: "lss-sense",
            version: env!("CARGO_PKG_VERSION"),
            config_digest: settings.digest(),
            config: settings.canonical().into_iter().collect(),
            seed: settings.seed,
            workers,
            started_unix_ms: self.started,
            finished_unix_ms: now_ms(),
            outputs: self.written.clone(),
        };
        let json = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
        self.write(MANIFEST_FILE, &(json + "\n"))?;
        Ok(self.written)
    }
}
