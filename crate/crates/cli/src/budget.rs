use std::fs;
use std::path::Path;

use clap::Args;
use serde::Deserialize;
use thiserror::Error;

use knotoid_core::SearchBudget;

pub const ENV_MAX_NODES: &str = "KNOTOID_MAX_NODES";
pub const ENV_MAX_DEPTH: &str = "KNOTOID_MAX_DEPTH";
pub const ENV_MAX_CHORDS: &str = "KNOTOID_MAX_CHORDS";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{field} must be a positive integer, got {value:?}")]
    BadValue { field: &'static str, value: String },
    #[error("reading config {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("parsing config {path}: {source}")]
    Parse { path: String, source: toml::de::Error },
}

/// Values are kept as text so malformed numbers surface as budget errors.
#[derive(Args, Debug, Clone, Default)]
pub struct BudgetArgs {
    /// Maximum distinct codes recorded by the search
    #[arg(long, env = ENV_MAX_NODES)]
    pub max_nodes: Option<String>,
    /// Maximum number of moves from the input
    #[arg(long, env = ENV_MAX_DEPTH)]
    pub max_depth: Option<String>,
    /// Largest chord count additions may reach (default: input chords + 2)
    #[arg(long, env = ENV_MAX_CHORDS)]
    pub max_chords: Option<String>,
}

#[derive(Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub max_nodes: Option<usize>,
    pub max_depth: Option<usize>,
    pub max_chords: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile, ConfigError> {
        let shown = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read { path: shown.clone(), source })?;
        toml::from_str(&text).map_err(|source| ConfigError::Parse { path: shown, source })
    }
}

/// Budget settings after merging defaults, config file, environment and
/// flags (later wins). `max_chords = None` means "input chords + 2".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolvedBudget {
    pub max_nodes: usize,
    pub max_depth: usize,
    pub max_chords: Option<usize>,
}

impl ResolvedBudget {
    pub fn resolve(args: &BudgetArgs, config: &ConfigFile) -> Result<ResolvedBudget, ConfigError> {
        let pick = |field: &'static str, flag: &Option<String>, file: Option<usize>| -> Result<Option<usize>, ConfigError> {
            let value = match flag {
                Some(text) => Some(text.trim().parse::<usize>().map_err(|_| ConfigError::BadValue {
                    field,
                    value: text.clone(),
                })?),
                None => file,
            };
            match value {
                Some(0) => Err(ConfigError::BadValue { field, value: "0".into() }),
                v => Ok(v),
            }
        };
        Ok(ResolvedBudget {
            max_nodes: pick("max_nodes", &args.max_nodes, config.max_nodes)?.unwrap_or(SearchBudget::DEFAULT_MAX_NODES),
            max_depth: pick("max_depth", &args.max_depth, config.max_depth)?.unwrap_or(SearchBudget::DEFAULT_MAX_DEPTH),
            max_chords: pick("max_chords", &args.max_chords, config.max_chords)?,
        })
    }

    pub fn for_chords(&self, n: usize) -> SearchBudget {
        SearchBudget { max_nodes: self.max_nodes, max_depth: self.max_depth, max_chords: self.max_chords.unwrap_or(n + 2) }
    }
}
