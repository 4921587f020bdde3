use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub file: String,
    pub sha256: String,
}

/// What a run read and how it was configured. Everything here is a function
/// of the command line and the input bytes, except `timing`.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    pub tool: String,
    pub inputs: BTreeMap<String, InputDigest>,
    pub formats: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub parameters: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Value>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            tool: format!("rig {}", env!("CARGO_PKG_VERSION")),
            inputs: BTreeMap::new(),
            formats: BTreeMap::new(),
            seed: None,
            parameters: BTreeMap::new(),
            timing: None,
        }
    }

    /// Reads an input file, recording its digest under `role`.
    pub fn read(&mut self, role: &str, path: &Path) -> Result<String, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        self.inputs.insert(
            role.to_string(),
            InputDigest {
                file: path.display().to_string(),
                sha256: hex::encode(Sha256::digest(&bytes)),
            },
        );
        String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{}: not valid UTF-8", path.display())))
    }

    pub fn format(&mut self, role: &str, format: &str) -> &mut Self {
        self.formats.insert(role.to_string(), format.to_string());
        self
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters
            .insert(key.to_string(), serde_json::to_value(value).expect("parameters serialize"));
        self
    }

    /// The manifest as embedded in output files: never carries timing.
    pub fn for_file(&self) -> Value {
        let mut m = self.clone();
        m.timing = None;
        serde_json::to_value(m).expect("manifest serializes")
    }
}
