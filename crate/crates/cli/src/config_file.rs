//! Key-value config files as an alternative to flags.
//!
//! One `key = value` pair per line, `#` starts a comment. Keys use the long
//! flag names without the leading dashes. Explicit flags win over config
//! values; unknown keys are rejected so typos fail loudly.

use anyhow::{Context, Result, bail};
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Default)]
pub struct ConfigMap {
    values: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
}

impl ConfigMap {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!(
                    "{}:{}: expected `key = value`, got {raw:?}",
                    path.display(),
                    idx + 1
                );
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if values.insert(key.clone(), value).is_some() {
                bail!("{}:{}: duplicate key {key:?}", path.display(), idx + 1);
            }
        }
        Ok(Self {
            values,
            used: RefCell::new(BTreeSet::new()),
        })
    }

    /// Typed lookup; marks the key as consumed.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.used.borrow_mut().insert(key.to_string());
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => match raw.parse::<T>() {
                Ok(value) => Ok(Some(value)),
                Err(e) => bail!("config key {key:?}: cannot parse {raw:?}: {e}"),
            },
        }
    }

    /// Reject keys that no command parameter consumed.
    pub fn finish(&self) -> Result<()> {
        let used = self.used.borrow();
        let unknown: Vec<&String> = self
            .values
            .keys()
            .filter(|key| !used.contains(*key))
            .collect();
        if !unknown.is_empty() {
            bail!(
                "unknown config keys: {}",
                unknown
                    .iter()
                    .map(|k| format!("{k:?}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
        }
        Ok(())
    }
}

/// Flag value, else config value, else default.
pub fn resolve<T: FromStr + Clone>(
    flag: &Option<T>,
    config: &ConfigMap,
    key: &str,
    default: T,
) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    if let Some(value) = flag {
        config.get::<T>(key)?; // mark as known even when overridden
        return Ok(value.clone());
    }
    Ok(config.get(key)?.unwrap_or(default))
}

/// Flag value, else config value, else an error naming the parameter.
pub fn resolve_required<T: FromStr + Clone>(
    flag: &Option<T>,
    config: &ConfigMap,
    key: &str,
) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    if let Some(value) = flag {
        config.get::<T>(key)?;
        return Ok(value.clone());
    }
    match config.get(key)? {
        Some(value) => Ok(value),
        None => bail!("missing required parameter --{key} (or config key {key:?})"),
    }
}
