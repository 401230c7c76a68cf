//! Run configuration: defaults, then a flat `key = value` file, then flags.

use std::path::{Path, PathBuf};

use kronloc_core::lattice::ZeroPolicy;
use serde::Serialize;

use crate::CliError;

pub const CONFIG_ENV: &str = "KRONLOC_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub precision: u32,
    pub c0: f64,
    pub zero_policy: Option<ZeroPolicy>,
    pub enumeration_cap: u64,
    /// Search grid margin; `None` means `0.1/ω`.
    pub slack: Option<f64>,
    pub search_cap: u64,
    pub support_cap: u64,
    pub tuple_cap: u64,
    pub output_dir: Option<PathBuf>,
    pub seed: u64,
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            precision: 256,
            c0: 0.2,
            zero_policy: None,
            enumeration_cap: 1_000_000_000,
            slack: None,
            search_cap: 1_000_000_000,
            support_cap: 1_000_000,
            tuple_cap: 10_000_000,
            output_dir: None,
            seed: 0,
            workers: None,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| CliError::Usage(format!("invalid value {value:?} for {key}")))
}

pub fn parse_zero_policy(value: &str) -> Result<Option<ZeroPolicy>, CliError> {
    match value {
        "auto" => Ok(None),
        "threshold" => Ok(Some(ZeroPolicy::Threshold)),
        "exact-multiplicative" | "exact" => Ok(Some(ZeroPolicy::ExactMultiplicative)),
        other => Err(CliError::Usage(format!(
            "zero_policy must be auto, threshold or exact-multiplicative, got {other:?}"
        ))),
    }
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "precision" => self.precision = parse(key, value)?,
            "c0" | "C0" => self.c0 = parse(key, value)?,
            "zero_policy" => self.zero_policy = parse_zero_policy(value)?,
            "enumeration_cap" => self.enumeration_cap = parse(key, value)?,
            "slack" => self.slack = if value == "auto" { None } else { Some(parse(key, value)?) },
            "search_cap" => self.search_cap = parse(key, value)?,
            "support_cap" => self.support_cap = parse(key, value)?,
            "tuple_cap" => self.tuple_cap = parse(key, value)?,
            "output_dir" => self.output_dir = Some(PathBuf::from(value)),
            "seed" => self.seed = parse(key, value)?,
            "workers" => self.workers = Some(parse(key, value)?),
            other => return Err(CliError::Usage(format!("unknown configuration key {other:?}"))),
        }
        Ok(())
    }

    pub fn apply_text(&mut self, text: &str, origin: &Path) -> Result<(), CliError> {
        for (i, line) in text.lines().enumerate() {
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(CliError::Usage(format!("{}:{}: expected key = value", origin.display(), i + 1)));
            };
            self.set(key.trim(), value.trim())
                .map_err(|e| CliError::Usage(format!("{}:{}: {e}", origin.display(), i + 1)))?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text, path)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.precision < 64 {
            return Err(CliError::Usage(format!("precision must be >= 64 bits, got {}", self.precision)));
        }
        if !(self.c0 > 0.0 && self.c0 < 0.25) {
            return Err(CliError::Usage(format!("C0 must lie in (0, 1/4), got {}", self.c0)));
        }
        if let Some(s) = self.slack {
            if !(s > 0.0) {
                return Err(CliError::Usage(format!("slack must be positive, got {s}")));
            }
        }
        if self.workers == Some(0) {
            return Err(CliError::Usage("workers must be >= 1".into()));
        }
        Ok(())
    }
}
