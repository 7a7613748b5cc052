//! Run settings: flags over environment over config file over defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::Failure;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_BUDGET: u64 = stabcomm::optimum::DEFAULT_BUDGET;
pub const TOL_ENV: &str = "STABCOMM_TOL";
pub const BUDGET_ENV: &str = "STABCOMM_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Config file contents; every key optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub budget: Option<u64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub seed: u64,
    pub tol: f64,
    pub budget: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
}

/// Values given on the command line.
#[derive(Clone, Debug, Default)]
pub struct FlagValues {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub budget: Option<u64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub config: Option<PathBuf>,
}

fn read_config(path: &Path) -> Result<FileConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::invalid(format!("bad config {}: {e}", path.display())))
}

fn env_value<T: std::str::FromStr>(
    name: &str,
    lookup: &dyn Fn(&str) -> Option<String>,
) -> Result<Option<T>, Failure> {
    match lookup(name) {
        None => Ok(None),
        Some(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::invalid(format!("{name}={v:?} is not a valid value"))),
    }
}

pub fn resolve(flags: FlagValues, lookup: &dyn Fn(&str) -> Option<String>) -> Result<Settings, Failure> {
    let file = match &flags.config {
        Some(p) => read_config(p)?,
        None => FileConfig::default(),
    };
    let tol = flags
        .tol
        .or(env_value(TOL_ENV, lookup)?)
        .or(file.tol)
        .unwrap_or(DEFAULT_TOL);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let budget = flags
        .budget
        .or(env_value(BUDGET_ENV, lookup)?)
        .or(file.budget)
        .unwrap_or(DEFAULT_BUDGET);
    Ok(Settings {
        seed: flags.seed.or(file.seed).unwrap_or(0),
        tol,
        budget,
        format: flags.format.or(file.format).unwrap_or(Format::Json),
        output: flags.output.or(file.output),
    })
}
