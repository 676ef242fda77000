//! Config-file support: every flag can instead be supplied through a JSON
//! object keyed by the long flag name; explicit flags win.

use std::path::Path;

use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Default)]
pub struct FileConfig(Option<Value>);

impl FileConfig {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(FileConfig(None));
        };
        let text = std::fs::read_to_string(path)?;
        let value: Value = serde_json::from_str(&text).map_err(|e| {
            CliError::Validation(format!("config {}: {e}", path.display()))
        })?;
        if !value.is_object() {
            return Err(CliError::Validation(format!(
                "config {} must hold a JSON object keyed by flag names",
                path.display()
            )));
        }
        Ok(FileConfig(Some(value)))
    }

    pub fn f64(&self, key: &str) -> Option<f64> {
        self.0.as_ref()?.get(key)?.as_f64()
    }

    pub fn u64(&self, key: &str) -> Option<u64> {
        self.0.as_ref()?.get(key)?.as_u64()
    }

    pub fn string(&self, key: &str) -> Option<String> {
        Some(self.0.as_ref()?.get(key)?.as_str()?.to_string())
    }
}

/// A flag value, falling back to the config file, then to a default.
pub fn resolve<T>(flag: Option<T>, from_config: Option<T>, default: Option<T>) -> Option<T> {
    flag.or(from_config).or(default)
}

/// As [`resolve`] but the value is mandatory.
pub fn require<T>(name: &str, flag: Option<T>, from_config: Option<T>) -> CliResult<T> {
    resolve(flag, from_config, None)
        .ok_or_else(|| CliError::Usage(format!("missing required parameter --{name}")))
}
