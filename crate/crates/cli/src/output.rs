//! Output directory handling, run manifests and exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::Common;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] epkit::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    /// The command ran but a checked property does not hold.
    #[error("check failed: {0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use epkit::Error as E;
        match self {
            CliError::Core(E::Constraint(_) | E::Parse(_) | E::SingularParameter(_)) => 2,
            CliError::Core(E::OutsideDomain(_) | E::Pole) => 3,
            CliError::Core(E::Fixture(_)) => 4,
            CliError::Json(_) => 2,
            _ => 1,
        }
    }
}

pub fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Collects output files and writes `manifest.json` last.
pub struct RunDir {
    dir: PathBuf,
    no_timestamp: bool,
    command: &'static str,
    inputs: Map<String, Value>,
    outputs: Vec<String>,
}

impl RunDir {
    pub fn create(common: &Common, command: &'static str) -> Result<Self, CliError> {
        fs::create_dir_all(&common.out).map_err(io_err(&common.out))?;
        Ok(RunDir {
            dir: common.out.clone(),
            no_timestamp: common.no_timestamp,
            command,
            inputs: Map::new(),
            outputs: Vec::new(),
        })
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) -> Result<(), CliError> {
        self.inputs.insert(key.to_string(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(io_err(&path))?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }

    pub fn finish(self) -> Result<(), CliError> {
        let mut manifest = Map::new();
        manifest.insert("tool".into(), "epkit".into());
        manifest.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        manifest.insert("command".into(), self.command.into());
        manifest.insert("inputs".into(), Value::Object(self.inputs));
        manifest.insert("outputs".into(), self.outputs.into());
        if !self.no_timestamp {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            manifest.insert("timestamp_unix".into(), secs.into());
        }
        let path = self.dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&Value::Object(manifest))?;
        text.push('\n');
        fs::write(&path, text).map_err(io_err(&path))
    }
}
