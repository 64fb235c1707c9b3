//! Flat `key = value` experiment configuration.
//!
//! The format is line-oriented: blank lines and `#` comments are skipped,
//! everything else must be `key = value`. Entries keep their file order, so
//! writing a config back out and re-parsing it reproduces the same entries
//! (lossless round trip of the value model; comments are not values).

use anyhow::{bail, Context, Result};
use std::fmt;
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Config {
    entries: Vec<(String, String)>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!(
                    "config line {}: expected `key = value`, got {raw:?}",
                    idx + 1
                );
            };
            let key = k.trim();
            if key.is_empty() {
                bail!("config line {}: empty key", idx + 1);
            }
            entries.push((key.to_string(), v.trim().to_string()));
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Last occurrence wins, like environment-style files.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Replaces the last occurrence of `key`, or appends a new entry.
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        if let Some(slot) = self.entries.iter_mut().rev().find(|(k, _)| k == key) {
            slot.1 = value;
        } else {
            self.entries.push((key.to_string(), value));
        }
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn get_str(&self, key: &str, default: &str) -> String {
        self.get(key).unwrap_or(default).to_string()
    }

    pub fn get_u64(&self, key: &str, default: u64) -> Result<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .with_context(|| format!("config key {key}: invalid integer {s:?}")),
        }
    }

    pub fn get_usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .with_context(|| format!("config key {key}: invalid integer {s:?}")),
        }
    }

    /// `inf` (any case) parses to positive infinity, for the p = infinity
    /// norms.
    pub fn get_f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => {
                parse_f64(s).with_context(|| format!("config key {key}: invalid number {s:?}"))
            }
        }
    }
}

pub fn parse_f64(s: &str) -> Result<f64> {
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    Ok(s.parse()?)
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_lossless() {
        let text = "# run shape\nseed = 7\nout_dir = out/x\np = inf\n\nn_max = 12\n";
        let cfg = Config::parse(text).unwrap();
        let again = Config::parse(&cfg.to_string()).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(cfg.get("seed"), Some("7"));
        assert_eq!(cfg.get_f64("p", 2.0).unwrap(), f64::INFINITY);
        assert_eq!(cfg.get_usize("n_max", 0).unwrap(), 12);
        assert_eq!(cfg.get_u64("missing", 3).unwrap(), 3);
    }

    #[test]
    fn set_overrides_and_appends() {
        let mut cfg = Config::parse("a = 1\nb = 2\n").unwrap();
        cfg.set("a", "9");
        cfg.set("c", "3");
        assert_eq!(cfg.to_string(), "a = 9\nb = 2\nc = 3\n");
    }

    #[test]
    fn malformed_lines_are_rejected() {
        assert!(Config::parse("just words\n").is_err());
        assert!(Config::parse("= 3\n").is_err());
        assert!(parse_f64("abc").is_err());
    }
}
