use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::{Command, Format};

/// JSON echo of a run, written to `<out>.manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub subcommand: String,
    pub parameters: Value,
    pub output_path: PathBuf,
    pub format: Format,
}

impl Manifest {
    pub fn new(command: &Command, output_path: &Path, format: Format) -> Result<Self> {
        let mut v = serde_json::to_value(command)?;
        let parameters = v
            .get_mut("parameters")
            .map(Value::take)
            .context("command has no parameters")?;
        Ok(Manifest {
            subcommand: command.name().to_string(),
            parameters,
            output_path: output_path.to_path_buf(),
            format,
        })
    }

    pub fn command(&self) -> Result<Command> {
        let v = serde_json::json!({
            "subcommand": self.subcommand,
            "parameters": self.parameters,
        });
        serde_json::from_value(v).context("manifest does not describe a runnable command")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read manifest {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("malformed manifest {}", path.display()))
    }

    pub fn write(&self) -> Result<PathBuf> {
        let path = sidecar(&self.output_path, "manifest.json");
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(path)
    }
}

/// `out.csv` -> `out.csv.<suffix>`.
pub fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}
