//! Flat `key = value` configuration files merged under command-line flags.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use anyhow::{Context, Result};

use crate::UsageError;

const KNOWN_KEYS: &[&str] = &[
    "seed",
    "profile",
    "sample_size",
    "n_components",
    "smote_k",
    "mode",
    "n_qubits",
    "share_pqc_params",
    "iteration_budget",
    "noise_placement",
    "optimizer",
    "rho_begin",
    "rho_end",
    "max_evaluations",
    "holdout",
    "channels",
    "grid",
    "channel",
    "strength",
    "k",
    "learning_rate",
    "max_iterations",
    "l2_strength",
    "metric",
    "dataset",
];

/// Values from the config file plus the record of every resolved setting.
#[derive(Debug, Default)]
pub struct Settings {
    file: BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        if !path.exists() {
            return Err(qfeature_core::Error::MissingFile(path.to_path_buf()).into());
        }
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(Self {
            file: parse(&text, &path.display().to_string())?,
            resolved: BTreeMap::new(),
        })
    }

    /// Flag value, else config-file value, else `default`.
    pub fn get<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let v = match self.lookup(key, flag)? {
            Some(v) => v,
            None => default,
        };
        self.resolved.insert(key.to_string(), v.to_string());
        Ok(v)
    }

    /// Like [`Settings::get`] but without a default; unresolved keys are
    /// recorded as `auto`.
    pub fn get_opt<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let v = self.lookup(key, flag)?;
        let shown = v
            .as_ref()
            .map_or_else(|| "auto".to_string(), |v| v.to_string());
        self.resolved.insert(key.to_string(), shown);
        Ok(v)
    }

    /// Records a value computed from other settings.
    pub fn note(&mut self, key: &str, value: impl Display) {
        self.resolved.insert(key.to_string(), value.to_string());
    }

    pub fn resolved(&self) -> &BTreeMap<String, String> {
        &self.resolved
    }

    fn lookup<T>(&self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        debug_assert!(KNOWN_KEYS.contains(&key), "unregistered key {key}");
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|e| {
                UsageError(format!("config key `{key}`: cannot parse `{raw}`: {e}")).into()
            }),
        }
    }
}

fn parse(text: &str, origin: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(UsageError(format!("{origin}:{}: expected `key = value`", i + 1)).into());
        };
        let k = k.trim();
        if !KNOWN_KEYS.contains(&k) {
            return Err(UsageError(format!("{origin}:{}: unknown key `{k}`", i + 1)).into());
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}
