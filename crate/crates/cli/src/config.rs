//! Run configuration: one flat TOML file.
//!
//! ```toml
//! experiment = "mahler-census"
//! seed = 7
//! output = "out/census"
//! degrees = [3, 4, 5, 6]
//! theta = 1.3
//! ```
//!
//! `experiment` is required. `seed` defaults to 0 and `output` to
//! `out/<experiment>`. Every other key is an experiment parameter.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{io_err, CliError, CliResult};
use crate::params::Value;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub params: BTreeMap<String, Value>,
    pub seed: u64,
    pub output: PathBuf,
}

impl ExperimentConfig {
    pub fn new(experiment: &str, seed: u64, output: impl Into<PathBuf>) -> Self {
        Self { experiment: experiment.to_string(), params: BTreeMap::new(), seed, output: output.into() }
    }

    pub fn with(mut self, name: &str, value: Value) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let table: toml::Table = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let mut experiment = None;
        let mut seed = 0u64;
        let mut output = None;
        let mut params = BTreeMap::new();
        for (k, v) in &table {
            match k.as_str() {
                "experiment" => match v {
                    toml::Value::String(s) => experiment = Some(s.clone()),
                    _ => return Err(CliError::Config("experiment must be a string".into())),
                },
                "seed" => match v {
                    toml::Value::Integer(i) if *i >= 0 => seed = *i as u64,
                    _ => return Err(CliError::Config("seed must be a non-negative integer".into())),
                },
                "output" => match v {
                    toml::Value::String(s) => output = Some(PathBuf::from(s)),
                    _ => return Err(CliError::Config("output must be a string path".into())),
                },
                _ => {
                    params.insert(k.clone(), Value::from_toml(k, v)?);
                }
            }
        }
        let experiment = experiment.ok_or_else(|| CliError::Config("missing `experiment`".into()))?;
        let output = output.unwrap_or_else(|| PathBuf::from("out").join(&experiment));
        Ok(Self { experiment, params, seed, output })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        Self::parse(&text)
    }
}
