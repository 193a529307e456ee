use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use egb_core::field::{parse_rational, Rational};

/// `key = value` lines from an optional config file. Flags always win.
#[derive(Debug, Default)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("config line {}: expected key=value", n + 1);
            };
            values.insert(k.trim().trim_start_matches("--").to_string(), v.trim().to_string());
        }
        Ok(Self { values })
    }

    /// The flag value if given, else the config value for `key`.
    pub fn pick(&self, key: &str, flag: Option<String>) -> Option<String> {
        flag.or_else(|| self.values.get(key).cloned())
    }

    pub fn parsed<T>(&self, key: &str, flag: Option<String>) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        self.pick(key, flag)
            .map(|s| s.parse::<T>().map_err(|e| anyhow::anyhow!("--{key} {s:?}: {e}")))
            .transpose()
    }

    pub fn rational(&self, key: &str, flag: Option<String>) -> Result<Option<Rational>> {
        self.pick(key, flag).map(|s| rat(&s).with_context(|| format!("--{key}"))).transpose()
    }

    pub fn rationals(&self, key: &str, flag: Option<String>) -> Result<Option<Vec<Rational>>> {
        self.pick(key, flag).map(|s| rat_list(&s).with_context(|| format!("--{key}"))).transpose()
    }
}

pub fn rat(s: &str) -> Result<Rational> {
    parse_rational(s.trim()).map_err(|e| anyhow::anyhow!("{s:?}: {e}"))
}

pub fn rat_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(rat).collect()
}

pub fn u64_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<u64>().with_context(|| format!("{x:?} is not a non-negative integer")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let cfg = RunConfig::parse("# comment\np = 3\n--lambda=96\n").unwrap();
        assert_eq!(cfg.pick("p", None).as_deref(), Some("3"));
        assert_eq!(cfg.pick("p", Some("2".into())).as_deref(), Some("2"));
        assert_eq!(cfg.pick("lambda", None).as_deref(), Some("96"));
        assert!(RunConfig::parse("nonsense").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(rat_list("1/2, 1/3").unwrap().len(), 2);
        assert!(rat_list("1/2,x").is_err());
        assert_eq!(u64_list("1,2,1").unwrap(), vec![1, 2, 1]);
    }
}
