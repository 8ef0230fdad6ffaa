//! Flat `key=value` configuration files. Every key mirrors a long CLI
//! flag (without the leading dashes); values are the same strings the
//! flag would accept. Explicit command-line flags always win.

use std::collections::BTreeMap;

use crate::error::{AppError, AppResult};

#[derive(Debug, Default, Clone)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Parse configuration text. Blank lines and lines starting with `#`
    /// are ignored; everything else must be `key = value`. Later
    /// occurrences of a key override earlier ones.
    pub fn parse(text: &str) -> AppResult<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(AppError::Usage(format!(
                    "config line {}: expected key=value, got `{line}`",
                    lineno + 1
                )));
            };
            let key = key.trim();
            if key.is_empty() {
                return Err(AppError::Usage(format!(
                    "config line {}: empty key",
                    lineno + 1
                )));
            }
            entries.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Config { entries })
    }

    pub fn load(path: &std::path::Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|s| s.as_str())
    }

    /// Resolve a string-valued option: the CLI value if present,
    /// otherwise the config value.
    pub fn merge_string(&self, cli: Option<String>, key: &str) -> Option<String> {
        cli.or_else(|| self.get(key).map(|s| s.to_string()))
    }

    /// Resolve a parsed option with the same precedence.
    pub fn merge_parsed<T, F>(&self, cli: Option<T>, key: &str, parse: F) -> AppResult<Option<T>>
    where
        F: FnOnce(&str) -> AppResult<T>,
    {
        match cli {
            Some(v) => Ok(Some(v)),
            None => match self.get(key) {
                Some(raw) => parse(raw).map(Some),
                None => Ok(None),
            },
        }
    }

    /// Resolve a boolean switch: true on the CLI wins; otherwise the
    /// config value must be `true` or `false`.
    pub fn merge_flag(&self, cli: bool, key: &str) -> AppResult<bool> {
        if cli {
            return Ok(true);
        }
        match self.get(key) {
            None => Ok(false),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(other) => Err(AppError::Usage(format!(
                "config key `{key}`: expected true or false, got `{other}`"
            ))),
        }
    }
}
