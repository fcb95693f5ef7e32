//! Flat `key = value` parameter files.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{CliError, CliResult};

pub const KEYS: [&str; 4] = ["omega", "eps", "k", "alpha_p"];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse(text: &str) -> CliResult<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Parameter(format!("config line {}: expected key = value", n + 1)))?;
        let key = key.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Parameter(format!("config line {}: unknown key '{key}'", n + 1)));
        }
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Parameter(format!("config line {}: '{}' is not a number", n + 1, value.trim())))?;
        out.insert(key, value);
    }
    Ok(out)
}

pub fn load(path: &Path) -> CliResult<BTreeMap<String, f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parameter(format!("cannot read config {}: {e}", path.display())))?;
    parse(&text)
}
