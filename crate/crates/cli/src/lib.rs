//! Configured, reproducible experiment runs over `bslab-core`.
//!
//! Each run writes deterministic CSV/JSON artifacts plus a `manifest.json`
//! recording the resolved parameters, seed, version, wall time, results and
//! every assertion, so that `bslab verify` can re-check it later.

pub mod config;
pub mod error;
pub mod experiments;
pub mod manifest;
pub mod params;

use std::path::Path;
use std::time::Instant;

pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};
pub use experiments::{experiments, find_experiment, Experiment};
pub use manifest::{verify_manifest, Artifact, Assertion, Manifest, Relation, VerifyReport};
pub use params::{Kind, ParamSpec, Params, Value};

use error::io_err;

/// Files and numbers produced by one experiment, before they are written.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<(String, String)>,
    pub results: serde_json::Map<String, serde_json::Value>,
    pub assertions: Vec<Assertion>,
}

impl Outcome {
    pub fn file(&mut self, name: impl Into<String>, contents: String) {
        self.files.push((name.into(), contents));
    }

    pub fn result(&mut self, key: &str, value: impl serde::Serialize) {
        self.results.insert(key.to_string(), serde_json::to_value(value).expect("plain data"));
    }

    pub fn assert(&mut self, a: Assertion) {
        self.assertions.push(a);
    }
}

/// Run an experiment without touching the file system.
pub fn execute(config: &ExperimentConfig) -> CliResult<(Params, Outcome)> {
    let exp = find_experiment(&config.experiment)?;
    let params = Params::resolve(exp.name, exp.params, &config.params)?;
    let outcome = (exp.run)(&params, config.seed)?;
    Ok((params, outcome))
}

/// Run an experiment, write its artifacts and manifest into `config.output`.
pub fn run(config: &ExperimentConfig) -> CliResult<Manifest> {
    let start = Instant::now();
    let (params, outcome) = execute(config)?;
    let wall = start.elapsed().as_secs_f64();
    let dir = &config.output;
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut artifacts = Vec::new();
    for (name, contents) in &outcome.files {
        let path = dir.join(name);
        std::fs::write(&path, contents).map_err(|e| io_err(&path, e))?;
        artifacts.push(Artifact::of(name, contents.as_bytes()));
    }
    let manifest = Manifest {
        experiment: config.experiment.clone(),
        parameters: params.values().clone(),
        seed: config.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_seconds: wall,
        results: outcome.results,
        assertions: outcome.assertions,
        artifacts,
    };
    let path = dir.join("manifest.json");
    std::fs::write(&path, manifest.to_json()).map_err(|e| io_err(&path, e))?;
    Ok(manifest)
}

/// Re-run the experiment recorded in a manifest and compare artifact bytes.
/// Returns the artifacts whose regenerated contents differ.
pub fn rerun_and_compare(manifest_path: &Path) -> CliResult<Vec<String>> {
    let m = Manifest::load(manifest_path)?;
    let mut config = ExperimentConfig::new(&m.experiment, m.seed, "");
    config.params = m.parameters.clone();
    let (_, outcome) = execute(&config)?;
    let mut differing = Vec::new();
    for art in &m.artifacts {
        match outcome.files.iter().find(|(n, _)| *n == art.file) {
            Some((_, c)) if manifest::sha256_hex(c.as_bytes()) == art.sha256 => {}
            _ => differing.push(art.file.clone()),
        }
    }
    Ok(differing)
}

/// Text table of experiments: name, exercised statement, parameters with defaults.
pub fn list_experiments() -> String {
    let mut out = String::new();
    for e in experiments() {
        out.push_str(&format!("{}\n  statement: {}\n", e.name, e.statement));
        for p in e.params {
            out.push_str(&format!("  {} ({}) = {}  {}\n", p.name, p.kind.name(), p.default, p.help));
        }
        out.push('\n');
    }
    out
}

/// Map `f` over `items` on all available cores (or `BSLAB_THREADS`);
/// results keep item order.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(usize, &T) -> R + Sync) -> Vec<R> {
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Mutex;
    let slots: Vec<Mutex<Option<R>>> = items.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = std::env::var("BSLAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .min(items.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(i, &items[i]);
                *slots[i].lock().expect("unpoisoned") = Some(r);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().expect("unpoisoned").expect("every item mapped")).collect()
}
