//! Flat key-value JSON config files mirroring the long flag names.
//! Flags take precedence; unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::Value;

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

pub struct ConfigMap {
    values: BTreeMap<String, Value>,
}

impl ConfigMap {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let values = match path {
            None => BTreeMap::new(),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
                let parsed: Value = serde_json::from_str(&text)
                    .map_err(|e| format!("config {} is not valid JSON: {e}", path.display()))?;
                match parsed {
                    Value::Object(map) => map.into_iter().collect(),
                    _ => return Err("config file must be a flat JSON object".into()),
                }
            }
        };
        Ok(Self { values })
    }

    fn take(&mut self, key: &str) -> Option<Value> {
        self.values.remove(key)
    }

    pub fn resolve_string(&mut self, key: &str, flag: Option<String>) -> CliResult<Option<String>> {
        let from_cfg = self.take(key);
        if flag.is_some() {
            return Ok(flag);
        }
        match from_cfg {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(Value::Number(n)) => Ok(Some(n.to_string())),
            Some(other) => Err(format!("config key {key:?} has unsupported type: {other}").into()),
        }
    }

    pub fn resolve_u64(&mut self, key: &str, flag: Option<u64>) -> CliResult<Option<u64>> {
        let from_cfg = self.take(key);
        if flag.is_some() {
            return Ok(flag);
        }
        match from_cfg {
            None => Ok(None),
            Some(Value::Number(n)) => n
                .as_u64()
                .map(Some)
                .ok_or_else(|| format!("config key {key:?} must be a non-negative integer").into()),
            Some(other) => Err(format!("config key {key:?} must be an integer, got {other}").into()),
        }
    }

    pub fn resolve_f64(&mut self, key: &str, flag: Option<f64>) -> CliResult<Option<f64>> {
        let from_cfg = self.take(key);
        if flag.is_some() {
            return Ok(flag);
        }
        match from_cfg {
            None => Ok(None),
            Some(Value::Number(n)) => n
                .as_f64()
                .map(Some)
                .ok_or_else(|| format!("config key {key:?} must be a number").into()),
            Some(other) => Err(format!("config key {key:?} must be a number, got {other}").into()),
        }
    }

    pub fn resolve_path(&mut self, key: &str, flag: Option<PathBuf>) -> CliResult<Option<PathBuf>> {
        Ok(self
            .resolve_string(key, flag.map(|p| p.display().to_string()))?
            .map(PathBuf::from))
    }

    /// Reject any key the command did not consume.
    pub fn finish(self) -> CliResult<()> {
        if let Some(key) = self.values.keys().next() {
            return Err(format!("unknown config key {key:?}").into());
        }
        Ok(())
    }
}
