//! Flat `key=value` run configuration. Lines starting with `#` and blank
//! lines are ignored; values set on the command line take precedence.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub const KEYS: &[&str] = &["r", "sigma", "t", "S", "expr", "group", "t-range", "S-range", "out", "scope"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| ConfigError { line: i + 1, message };
            let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected key=value, got {line:?}")))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(err(format!("unknown key {key:?}; known keys: {}", KEYS.join(", "))));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// `low:high:count` as used by `--t-range` and `--S-range`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub low: f64,
    pub high: f64,
    pub count: usize,
}

impl FromStr for AxisRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [low, high, count] = parts.as_slice() else {
            return Err(format!("range {s:?} must look like low:high:count"));
        };
        let num = |x: &str| x.parse::<f64>().map_err(|_| format!("{x:?} is not a number"));
        Ok(AxisRange {
            low: num(low)?,
            high: num(high)?,
            count: count.parse().map_err(|_| format!("{count:?} is not a point count"))?,
        })
    }
}
