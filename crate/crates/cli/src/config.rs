//! `key=value` settings files.
//!
//! Keys are the long flag names without dashes (`q-min`, `threshold`, ...).
//! Blank lines and lines starting with `#` are ignored.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Input(format!("config line {}: expected key=value", i + 1))
            })?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Flag value if given, else the parsed config value.
    pub fn layer<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| CliError::Input(format!("config key {key}: {e}")))
            })
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let cfg = ConfigFile::parse("# sweep\nq = 12\nseed=3\n\n").unwrap();
        assert_eq!(cfg.layer::<u64>(None, "q").unwrap(), Some(12));
        assert_eq!(cfg.layer(Some(5u64), "q").unwrap(), Some(5));
        assert_eq!(cfg.layer::<u64>(None, "trials").unwrap(), None);
        assert!(cfg.layer::<u64>(None, "seed").is_ok());
    }

    #[test]
    fn malformed() {
        assert!(ConfigFile::parse("q 12").is_err());
        let cfg = ConfigFile::parse("q=abc").unwrap();
        assert!(cfg.layer::<u64>(None, "q").is_err());
    }
}
