//! Run manifests and re-checkable assertions.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{io_err, CliError, CliResult};

/// How an assertion's recorded values are judged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Relation {
    /// Every value `<= bound`.
    AtMost { bound: f64 },
    /// Every value `>= bound`.
    AtLeast { bound: f64 },
    /// Every value within `tol` of `target`.
    Within { target: f64, tol: f64 },
    StrictlyDecreasing,
    NonDecreasing,
    /// `max / min <= factor` over positive values.
    SpreadAtMost { factor: f64 },
    /// `values[i] == reference[i]` exactly.
    EqualsReference,
    /// `values[i] <= reference[i]`.
    AtMostReference,
}

impl Relation {
    pub fn holds(&self, values: &[f64], reference: &[f64]) -> bool {
        if values.iter().any(|v| !v.is_finite()) {
            return false;
        }
        let pairs = || values.iter().zip(reference);
        match *self {
            Relation::AtMost { bound } => values.iter().all(|&v| v <= bound),
            Relation::AtLeast { bound } => values.iter().all(|&v| v >= bound),
            Relation::Within { target, tol } => values.iter().all(|&v| (v - target).abs() <= tol),
            Relation::StrictlyDecreasing => values.windows(2).all(|w| w[1] < w[0]),
            Relation::NonDecreasing => values.windows(2).all(|w| w[1] >= w[0]),
            Relation::SpreadAtMost { factor } => {
                let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = values.iter().cloned().fold(0.0, f64::max);
                values.is_empty() || (lo > 0.0 && hi / lo <= factor)
            }
            Relation::EqualsReference => values.len() == reference.len() && pairs().all(|(a, b)| a == b),
            Relation::AtMostReference => values.len() == reference.len() && pairs().all(|(a, b)| a <= b),
        }
    }
}

mod finite_or_null {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let opt: Vec<Option<f64>> = v.iter().map(|x| x.is_finite().then_some(*x)).collect();
        opt.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let opt: Vec<Option<f64>> = Vec::deserialize(d)?;
        Ok(opt.into_iter().map(|x| x.unwrap_or(f64::NAN)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub relation: Relation,
    #[serde(with = "finite_or_null")]
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "finite_or_null")]
    pub reference: Vec<f64>,
    /// Free-form labels for the values (sizes, degrees, ...).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    pub passed: bool,
}

impl Assertion {
    pub fn new(name: &str, relation: Relation, values: Vec<f64>) -> Self {
        Self::with_reference(name, relation, values, Vec::new())
    }

    pub fn with_reference(name: &str, relation: Relation, values: Vec<f64>, reference: Vec<f64>) -> Self {
        let passed = relation.holds(&values, &reference);
        Self { name: name.to_string(), relation, values, reference, labels: Vec::new(), passed }
    }

    pub fn labeled<T: ToString>(mut self, labels: impl IntoIterator<Item = T>) -> Self {
        self.labels = labels.into_iter().map(|l| l.to_string()).collect();
        self
    }

    pub fn recheck(&self) -> bool {
        self.relation.holds(&self.values, &self.reference)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub file: String,
    pub bytes: usize,
    pub sha256: String,
}

impl Artifact {
    pub fn of(file: &str, contents: &[u8]) -> Self {
        Self { file: file.to_string(), bytes: contents.len(), sha256: sha256_hex(contents) }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: String,
    pub parameters: BTreeMap<String, crate::params::Value>,
    pub seed: u64,
    pub version: String,
    pub wall_time_seconds: f64,
    pub results: serde_json::Map<String, serde_json::Value>,
    pub assertions: Vec<Assertion>,
    pub artifacts: Vec<Artifact>,
}

impl Manifest {
    pub fn all_passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Manifest(e.to_string()))
    }
}

/// Outcome of re-checking a manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    /// `(assertion, recorded, recomputed)`.
    pub assertions: Vec<(String, bool, bool)>,
    /// Artifacts whose bytes on disk no longer match the recorded hash.
    pub mismatched_artifacts: Vec<String>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.mismatched_artifacts.is_empty() && self.assertions.iter().all(|(_, rec, now)| *rec && *now)
    }
}

/// Recompute every assertion from its recorded values and re-hash the
/// artifacts next to the manifest.
pub fn verify_manifest(path: &Path) -> CliResult<VerifyReport> {
    let m = Manifest::load(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let assertions = m.assertions.iter().map(|a| (a.name.clone(), a.passed, a.recheck())).collect();
    let mut mismatched_artifacts = Vec::new();
    for art in &m.artifacts {
        match std::fs::read(dir.join(&art.file)) {
            Ok(bytes) if sha256_hex(&bytes) == art.sha256 => {}
            _ => mismatched_artifacts.push(art.file.clone()),
        }
    }
    Ok(VerifyReport { assertions, mismatched_artifacts })
}
