//! Reproducible experiment runs: JSON configs in, JSON results out.
//!
//! A result file echoes its config, stores one flat record per sample and a
//! summary that is a pure function of the samples and the config. Loading a
//! result recomputes the summary and rejects the file if it differs.

mod experiments;

pub use experiments::{columns, run_experiment, summarize, EXPERIMENTS};

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "numlab-result/1";

pub type Sample = Map<String, Value>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    pub seed: u64,
    pub output: PathBuf,
}

/// A threshold test echoed in summaries; `lo`/`hi` are the embedded bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub pass: bool,
}

impl Check {
    pub fn within(name: impl Into<String>, value: f64, lo: Option<f64>, hi: Option<f64>) -> Check {
        let pass = value.is_finite() && lo.is_none_or(|l| value >= l) && hi.is_none_or(|h| value <= h);
        Check { name: name.into(), value, lo, hi, pass }
    }

    /// Open interval `(lo, hi)`.
    pub fn strictly_within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Check {
        Check { name: name.into(), value, lo: Some(lo), hi: Some(hi), pass: value > lo && value < hi }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Check {
        Check { name: name.into(), value: if ok { 1.0 } else { 0.0 }, lo: Some(1.0), hi: None, pass: ok }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub aggregates: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
}

impl Summary {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub schema: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub started_at: String,
    pub wallclock_ms: u64,
    pub samples: Vec<Sample>,
    pub summary: Summary,
}

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("unknown experiment {0:?}")]
    UnknownExperiment(String),
    #[error("config schema violation: {0}")]
    Schema(String),
    #[error("output path not writable: {0}")]
    Unwritable(String),
    #[error("corrupt result file at {path}: {msg}")]
    Corrupt { path: String, msg: String },
    #[error(transparent)]
    Run(#[from] crate::Error),
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::UnknownExperiment(_) => 2,
            LabError::Schema(_) => 3,
            LabError::Unwritable(_) => 4,
            LabError::Corrupt { .. } => 5,
            LabError::Run(_) => 1,
        }
    }
}

pub type LabResult<T> = std::result::Result<T, LabError>;

/// Typed access to `params` that records which keys were read, so unknown
/// keys can be rejected.
pub struct Params<'a> {
    map: &'a Map<String, Value>,
    used: Vec<&'static str>,
}

impl<'a> Params<'a> {
    pub fn new(map: &'a Map<String, Value>) -> Self {
        Params { map, used: vec![] }
    }

    fn get(&mut self, key: &'static str) -> Option<&'a Value> {
        self.used.push(key);
        self.map.get(key)
    }

    pub fn usize(&mut self, key: &'static str, default: usize) -> LabResult<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| LabError::Schema(format!("params.{key} must be a non-negative integer"))),
        }
    }

    pub fn f64(&mut self, key: &'static str, default: f64) -> LabResult<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.as_f64().ok_or_else(|| LabError::Schema(format!("params.{key} must be a number"))),
        }
    }

    pub fn string(&mut self, key: &'static str, default: &str) -> LabResult<String> {
        match self.get(key) {
            None => Ok(default.to_string()),
            Some(v) => v
                .as_str()
                .map(String::from)
                .ok_or_else(|| LabError::Schema(format!("params.{key} must be a string"))),
        }
    }

    pub fn usize_list(&mut self, key: &'static str, default: &[usize]) -> LabResult<Vec<usize>> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(Value::Array(a)) if !a.is_empty() => a
                .iter()
                .map(|v| v.as_u64().map(|x| x as usize))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| LabError::Schema(format!("params.{key} must hold non-negative integers"))),
            Some(_) => Err(LabError::Schema(format!("params.{key} must be a non-empty array"))),
        }
    }

    /// Fails on any key that was never read.
    pub fn finish(self) -> LabResult<()> {
        for k in self.map.keys() {
            if !self.used.contains(&k.as_str()) {
                return Err(LabError::Schema(format!("unknown parameter params.{k}")));
            }
        }
        Ok(())
    }
}

pub fn load_config(path: &Path) -> LabResult<ExperimentConfig> {
    let text = fs::read_to_string(path).map_err(|e| LabError::Schema(format!("cannot read {}: {e}", path.display())))?;
    let raw: Value = serde_json::from_str(&text).map_err(|e| LabError::Schema(format!("invalid JSON: {e}")))?;
    // Unknown experiments get their own exit code, so look at the name first.
    if let Some(name) = raw.get("experiment").and_then(Value::as_str) {
        if !EXPERIMENTS.contains(&name) {
            return Err(LabError::UnknownExperiment(name.to_string()));
        }
    }
    serde_json::from_value(raw).map_err(|e| LabError::Schema(e.to_string()))
}

fn resolve_output(config: &ExperimentConfig, base: Option<&Path>) -> PathBuf {
    match base {
        Some(b) if config.output.is_relative() => b.join(&config.output),
        _ => config.output.clone(),
    }
}

fn check_writable(path: &Path) -> LabResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    if path.is_dir() {
        return Err(LabError::Unwritable(format!("{} is a directory", path.display())));
    }
    let probe = dir.join(format!(".lab-probe-{}", std::process::id()));
    fs::File::create(&probe).map_err(|e| LabError::Unwritable(format!("{}: {e}", path.display())))?;
    let _ = fs::remove_file(&probe);
    Ok(())
}

/// Writes via a temporary file in the same directory and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> LabResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    let unwritable = |e: std::io::Error| LabError::Unwritable(format!("{}: {e}", path.display()));
    let mut f = fs::File::create(&tmp).map_err(unwritable)?;
    f.write_all(bytes).map_err(unwritable)?;
    f.sync_all().map_err(unwritable)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        unwritable(e)
    })
}

/// Validates, runs and returns the result without writing it.
pub fn execute(config: &ExperimentConfig) -> LabResult<ExperimentResult> {
    if !EXPERIMENTS.contains(&config.experiment.as_str()) {
        return Err(LabError::UnknownExperiment(config.experiment.clone()));
    }
    let started_at = format!(
        "unix:{}",
        SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
    );
    let t0 = Instant::now();
    let samples = run_experiment(&config.experiment, &config.params, config.seed)?;
    let summary = summarize(&config.experiment, &config.params, &samples)?;
    Ok(ExperimentResult {
        schema: SCHEMA_VERSION.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        started_at,
        wallclock_ms: t0.elapsed().as_millis() as u64,
        samples,
        summary,
    })
}

/// `lab run`: loads the config, runs it and writes the result. Relative
/// output paths are taken relative to the config file.
pub fn run_config_file(config_path: &Path) -> LabResult<PathBuf> {
    let config = load_config(config_path)?;
    let out = resolve_output(&config, config_path.parent());
    // Parameters are validated by a dry parse before any work is done.
    experiments::validate_params(&config.experiment, &config.params)?;
    check_writable(&out)?;
    let result = execute(&config)?;
    let bytes = serde_json::to_vec_pretty(&result).map_err(|e| LabError::Run(e.into()))?;
    write_atomic(&out, &bytes)?;
    Ok(out)
}

fn corrupt(path: impl Into<String>, msg: impl Into<String>) -> LabError {
    LabError::Corrupt { path: path.into(), msg: msg.into() }
}

/// First differing location between two JSON values.
fn diff_path(a: &Value, b: &Value, at: String) -> Option<String> {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            for k in x.keys().chain(y.keys()) {
                match (x.get(k), y.get(k)) {
                    (Some(p), Some(q)) => {
                        if let Some(d) = diff_path(p, q, format!("{at}.{k}")) {
                            return Some(d);
                        }
                    }
                    _ => return Some(format!("{at}.{k}")),
                }
            }
            None
        }
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                return Some(at);
            }
            x.iter().zip(y).enumerate().find_map(|(i, (p, q))| diff_path(p, q, format!("{at}[{i}]")))
        }
        _ if a == b => None,
        _ => Some(at),
    }
}

/// Parses and validates a result file: field types, sample columns, and a
/// summary that matches the one recomputed from the samples.
pub fn load_result(path: &Path) -> LabResult<ExperimentResult> {
    let text = fs::read_to_string(path).map_err(|e| corrupt("$", format!("cannot read {}: {e}", path.display())))?;
    let raw: Value = serde_json::from_str(&text).map_err(|e| corrupt("$", format!("invalid JSON: {e}")))?;
    let obj = raw.as_object().ok_or_else(|| corrupt("$", "not an object"))?;
    for key in ["schema", "version", "config", "started_at", "wallclock_ms", "samples", "summary"] {
        if !obj.contains_key(key) {
            return Err(corrupt(format!("$.{key}"), "missing"));
        }
    }
    if obj["schema"] != Value::from(SCHEMA_VERSION) {
        return Err(corrupt("$.schema", format!("expected {SCHEMA_VERSION:?}")));
    }
    let config: ExperimentConfig =
        serde_json::from_value(obj["config"].clone()).map_err(|e| corrupt("$.config", e.to_string()))?;
    if !EXPERIMENTS.contains(&config.experiment.as_str()) {
        return Err(corrupt("$.config.experiment", format!("unknown experiment {:?}", config.experiment)));
    }
    let samples = obj["samples"].as_array().ok_or_else(|| corrupt("$.samples", "not an array"))?;
    let cols = columns(&config.experiment);
    for (i, s) in samples.iter().enumerate() {
        let so = s.as_object().ok_or_else(|| corrupt(format!("$.samples[{i}]"), "not an object"))?;
        for c in cols {
            if !so.contains_key(*c) {
                return Err(corrupt(format!("$.samples[{i}].{c}"), "missing"));
            }
        }
        for k in so.keys() {
            if !cols.contains(&k.as_str()) {
                return Err(corrupt(format!("$.samples[{i}].{k}"), "unexpected field"));
            }
        }
    }
    let result: ExperimentResult = serde_json::from_value(raw.clone()).map_err(|e| corrupt("$", e.to_string()))?;
    let recomputed = summarize(&config.experiment, &config.params, &result.samples)
        .map_err(|e| corrupt("$.summary", format!("cannot recompute: {e}")))?;
    let stored = serde_json::to_value(&result.summary).map_err(|e| LabError::Run(e.into()))?;
    let fresh = serde_json::to_value(&recomputed).map_err(|e| LabError::Run(e.into()))?;
    if let Some(p) = diff_path(&stored, &fresh, "$.summary".into()) {
        return Err(corrupt(p, "summary does not match the samples"));
    }
    Ok(result)
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render_csv(r: &ExperimentResult) -> String {
    let cols = columns(&r.config.experiment);
    let mut out = cols.join(",");
    out.push('\n');
    for s in &r.samples {
        let row: Vec<String> = cols.iter().map(|c| csv_cell(&s[*c])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn fmt_bound(b: Option<f64>) -> String {
    b.map_or("-".into(), |v| format!("{v}"))
}

pub fn render_summary(r: &ExperimentResult) -> String {
    let mut out = format!(
        "experiment {} (seed {}, {} samples, {} ms)\n",
        r.config.experiment,
        r.config.seed,
        r.samples.len(),
        r.wallclock_ms
    );
    for (k, v) in &r.summary.aggregates {
        out.push_str(&format!("  {k} = {v}\n"));
    }
    for c in &r.summary.checks {
        out.push_str(&format!(
            "  [{}] {} = {} (bounds {} .. {})\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            fmt_bound(c.lo),
            fmt_bound(c.hi)
        ));
    }
    out.push_str(if r.summary.all_pass() { "overall: PASS\n" } else { "overall: FAIL\n" });
    out
}
