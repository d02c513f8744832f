//! Flat key-value experiment configs with dotted sections.
//!
//! A config file is `key = value` lines (comments start with `#`); command
//! line flags overlay file values, and the `SGFLAB_SEED` environment
//! variable sits between them for the seed only: flag > env > file >
//! default. Every run echoes the resolved map, so artifacts are
//! self-describing.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::CliError;

/// Default seed used when neither config, env nor flag provides one.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

#[derive(Debug, Clone, Default)]
pub struct Config {
    map: BTreeMap<String, String>,
}

impl Config {
    pub fn from_map(map: BTreeMap<String, String>) -> Self {
        Config { map }
    }

    /// Parses the flat text format. Unknown keys are kept (validation
    /// happens per study); malformed lines are errors with line numbers.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Validation(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(CliError::Validation(format!("line {}: empty key", lineno + 1)));
            }
            map.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Config { map })
    }

    /// Serializes back to the flat format (keys sorted). `parse` of the
    /// output reproduces the map exactly.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.map {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.map.insert(key.to_string(), value.into());
    }

    pub fn contains(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.map
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.get(key).unwrap_or(default)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| CliError::Validation(format!("{key}: not a number: '{s}'"))),
        }
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => parse_u64(s)
                .ok_or_else(|| CliError::Validation(format!("{key}: not an integer: '{s}'"))),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        Ok(self.u64_or(key, default as u64)? as usize)
    }

    pub fn u32_or(&self, key: &str, default: u32) -> Result<u32, CliError> {
        Ok(self.u64_or(key, default as u64)? as u32)
    }

    /// Comma-separated float list.
    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(s) => s
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse()
                        .map_err(|_| CliError::Validation(format!("{key}: bad entry '{p}'")))
                })
                .collect::<Result<Vec<f64>, _>>()
                .map(Some),
        }
    }

    pub fn u32_list(&self, key: &str) -> Result<Option<Vec<u32>>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(s) => s
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse()
                        .map_err(|_| CliError::Validation(format!("{key}: bad entry '{p}'")))
                })
                .collect::<Result<Vec<u32>, _>>()
                .map(Some),
        }
    }

    /// Resolved seed. Precedence (flag > SGFLAB_SEED env > config file) is
    /// applied during argument parsing; by the time this runs the map holds
    /// the winning value, or nothing, in which case the default applies.
    pub fn seed(&self) -> Result<u64, CliError> {
        match self.get("seed") {
            Some(s) => parse_u64(s)
                .ok_or_else(|| CliError::Validation(format!("seed: not an integer: '{s}'"))),
            None => Ok(DEFAULT_SEED),
        }
    }
}

fn parse_u64(s: &str) -> Option<u64> {
    if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16).ok()
    } else {
        s.parse().ok()
    }
}
