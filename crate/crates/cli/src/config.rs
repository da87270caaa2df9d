//! Flat `key = value` configuration files. Keys are long flag names without
//! the dashes (`n-min` and `n_min` are the same key); flags given on the
//! command line win over the file.

use std::collections::HashMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

pub const KEYS: &[&str] = &[
    "prec", "out", "format", "threads", "checkpoint", "n", "a", "x", "y", "count", "n-min", "n-max", "a-min",
    "a-max", "m", "y-max", "x-max", "strategy", "box-bound", "suite", "diagnostics", "degenerate",
];

#[derive(Debug, Default)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
            let key = k.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return Err(format!("config line {}: unknown key {:?}", i + 1, k.trim()));
            }
            let v = v.trim().trim_matches('"');
            values.insert(key, v.to_string());
        }
        Ok(FileConfig { values })
    }

    /// `cli` if given, else the file value, parsed.
    pub fn pick<T>(&self, cli: Option<T>, key: &str) -> Result<Option<T>, String>
    where
        T: FromStr,
        T::Err: Display,
    {
        debug_assert!(KEYS.contains(&key), "{key}");
        if cli.is_some() {
            return Ok(cli);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|e| format!("config key {key}: {e}")),
        }
    }

    pub fn require<T>(&self, cli: Option<T>, key: &str) -> Result<T, String>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.pick(cli, key)?.ok_or_else(|| format!("missing required option --{key}"))
    }

    pub fn flag(&self, cli: bool, key: &str) -> Result<bool, String> {
        Ok(cli || self.pick::<bool>(None, key)?.unwrap_or(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_override() {
        let c = FileConfig::parse("# sweep\nn_min = 2\ny-max=50  # short\nstrategy = \"naive\"\n").unwrap();
        assert_eq!(c.pick::<i64>(None, "n-min").unwrap(), Some(2));
        assert_eq!(c.pick(Some(7i64), "n-min").unwrap(), Some(7));
        assert_eq!(c.pick::<u64>(None, "y-max").unwrap(), Some(50));
        assert_eq!(c.pick::<String>(None, "strategy").unwrap().as_deref(), Some("naive"));
        assert_eq!(c.pick::<i64>(None, "a").unwrap(), None);
        assert!(c.require::<i64>(None, "a").is_err());
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(FileConfig::parse("colour = red").is_err());
        assert!(FileConfig::parse("n-min 3").is_err());
        let c = FileConfig::parse("n = three").unwrap();
        assert!(c.pick::<i64>(None, "n").is_err());
    }
}
