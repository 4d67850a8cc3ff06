use std::path::{Path, PathBuf};

use qiradar_core::export::CSV_SCHEMA_VERSION;
use qiradar_core::Result;
use serde::{Deserialize, Serialize};

use crate::commands::Invocation;

pub const MANIFEST_SUFFIX: &str = ".manifest.json";

/// Written beside every output. `invocation` alone is enough to regenerate
/// the outputs; everything else is provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub csv_schema_version: u32,
    pub timestamp: String,
    pub argv: Vec<String>,
    #[serde(flatten)]
    pub invocation: Invocation,
    pub outputs: Vec<PathBuf>,
    /// Command-specific results such as the fig3 crossover or the desk scenario.
    #[serde(default)]
    pub extra: serde_json::Value,
}

impl RunManifest {
    pub fn new(invocation: Invocation, outputs: Vec<PathBuf>, extra: serde_json::Value) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            csv_schema_version: CSV_SCHEMA_VERSION,
            timestamp: chrono::Utc::now().to_rfc3339(),
            argv: std::env::args().collect(),
            invocation,
            outputs,
            extra,
        }
    }

    pub fn path_for(out: &Path) -> PathBuf {
        let mut name = out.as_os_str().to_owned();
        name.push(MANIFEST_SUFFIX);
        PathBuf::from(name)
    }

    pub fn write(&self) -> Result<PathBuf> {
        let path = Self::path_for(&self.invocation.out);
        std::fs::write(&path, serde_json::to_string_pretty(self)?)?;
        Ok(path)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}
