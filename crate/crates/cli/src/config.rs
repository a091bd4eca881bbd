//! Sweep configuration: a TOML file plus `key=value` overrides.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use ncbloch_core::lattice::{DisorderKind, GalleryModel};
use ncbloch_core::nccalc::TraceStrategy;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("bad override `{0}`: expected key=value")]
    Override(String),
    #[error("{key}: {message}")]
    Invalid { key: &'static str, message: String },
}

fn bad(key: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key,
        message: message.into(),
    }
}

/// A list of values, a single value, or `{ start, stop, steps }` (inclusive).
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Range {
    One(f64),
    List(Vec<f64>),
    Linear { start: f64, stop: f64, steps: usize },
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Range::One(v) => vec![*v],
            Range::List(v) => v.clone(),
            Range::Linear { start, stop, steps } => match steps {
                0 => vec![],
                1 => vec![*start],
                n => (0..*n)
                    .map(|i| start + (stop - start) * i as f64 / (*n - 1) as f64)
                    .collect(),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum InvariantChoice {
    ChernEven,
    ChernOdd,
    IndexEven,
    IndexOdd,
    All,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Jsonl,
    Csv,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub name: String,
    pub m: Range,
    #[serde(rename = "L")]
    pub size: usize,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DisorderSection {
    #[serde(default = "default_kind")]
    pub kind: String,
    #[serde(default = "default_lambda")]
    pub lambda: Range,
    #[serde(default = "one")]
    pub realizations: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for DisorderSection {
    fn default() -> Self {
        Self {
            kind: default_kind(),
            lambda: default_lambda(),
            realizations: 1,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    #[serde(default = "default_format")]
    pub format: OutputFormat,
    /// Also write a CSV copy next to the JSONL file.
    #[serde(default)]
    pub csv: bool,
    /// Record wall_time_ms; off by default so output files are reproducible.
    #[serde(default)]
    pub timing: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            path: None,
            format: default_format(),
            csv: false,
            timing: false,
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub model: ModelSection,
    #[serde(default)]
    pub disorder: DisorderSection,
    pub invariant: InvariantChoice,
    #[serde(default = "default_strategy")]
    pub trace_strategy: String,
    #[serde(default = "half")]
    pub bulk_fraction: f64,
    #[serde(default = "one")]
    pub x0_grid: usize,
    #[serde(default)]
    pub output: OutputSection,
}

fn default_kind() -> String {
    "bond".into()
}
fn default_lambda() -> Range {
    Range::One(0.0)
}
fn default_format() -> OutputFormat {
    OutputFormat::Jsonl
}
fn default_strategy() -> String {
    "periodic".into()
}
fn one() -> usize {
    1
}
fn half() -> f64 {
    0.5
}

/// Validated configuration.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub model: String,
    pub masses: Vec<f64>,
    pub size: usize,
    pub kind: DisorderKind,
    pub lambdas: Vec<f64>,
    pub realizations: usize,
    pub seed: u64,
    pub invariants: Vec<InvariantChoice>,
    pub strategy: TraceStrategy,
    pub x0_grid: usize,
    pub output: OutputSection,
}

impl SweepConfig {
    pub fn from_path(path: &Path, overrides: &[String]) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_str(&text, overrides)
    }

    pub fn from_str(text: &str, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let raw: RawConfig = table
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
        Self::validate(raw)
    }

    pub fn validate(raw: RawConfig) -> Result<Self, ConfigError> {
        let masses = raw.model.m.values();
        if masses.is_empty() {
            return Err(bad("model.m", "empty parameter range"));
        }
        if masses.iter().any(|v| !v.is_finite()) {
            return Err(bad("model.m", "values must be finite"));
        }
        let probe = GalleryModel::from_name(&raw.model.name, masses[0])
            .map_err(|e| bad("model.name", e.to_string()))?;
        if raw.model.size < 4 {
            return Err(bad("model.L", "need L ≥ 4"));
        }
        let lambdas = raw.disorder.lambda.values();
        if lambdas.is_empty() {
            return Err(bad("disorder.lambda", "empty disorder range"));
        }
        if lambdas.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(bad("disorder.lambda", "strengths must be finite and ≥ 0"));
        }
        let kind = match raw.disorder.kind.as_str() {
            "bond" => DisorderKind::Bond,
            "onsite" => DisorderKind::Onsite,
            other => return Err(bad("disorder.kind", format!("unknown kind `{other}` (bond | onsite)"))),
        };
        if raw.disorder.realizations == 0 {
            return Err(bad("disorder.realizations", "need at least one realization"));
        }
        let strategy = match raw.trace_strategy.as_str() {
            "periodic" => TraceStrategy::PeriodicSawtooth,
            "open_bulk" => TraceStrategy::open_bulk(raw.bulk_fraction)
                .map_err(|e| bad("bulk_fraction", e.to_string()))?,
            other => {
                return Err(bad(
                    "trace_strategy",
                    format!("unknown strategy `{other}` (periodic | open_bulk)"),
                ))
            }
        };
        if raw.x0_grid == 0 {
            return Err(bad("x0_grid", "need at least one point per direction"));
        }
        let d = probe.dim();
        let chiral = probe.is_chiral();
        let invariants = match raw.invariant {
            InvariantChoice::All if d % 2 == 0 => {
                vec![InvariantChoice::ChernEven, InvariantChoice::IndexEven]
            }
            InvariantChoice::All if chiral => {
                vec![InvariantChoice::ChernOdd, InvariantChoice::IndexOdd]
            }
            InvariantChoice::All => return Err(bad("invariant", "model has no invariant")),
            InvariantChoice::ChernEven | InvariantChoice::IndexEven if d % 2 == 1 => {
                return Err(bad("invariant", format!("even invariant on a d = {d} model")))
            }
            InvariantChoice::ChernOdd | InvariantChoice::IndexOdd if d % 2 == 0 || !chiral => {
                return Err(bad("invariant", "odd invariants need an odd-dimensional chiral model"))
            }
            c => vec![c],
        };
        let odd = invariants.contains(&InvariantChoice::ChernOdd);
        if odd && kind == DisorderKind::Onsite && lambdas.iter().any(|&l| l > 0.0) {
            return Err(bad("disorder.kind", "onsite disorder breaks the chiral symmetry"));
        }
        Ok(Self {
            model: probe.name().to_string(),
            masses,
            size: raw.model.size,
            kind,
            lambdas,
            realizations: raw.disorder.realizations,
            seed: raw.disorder.seed,
            invariants,
            strategy,
            x0_grid: raw.x0_grid,
            output: raw.output,
        })
    }

    pub fn gallery(&self, m: f64) -> GalleryModel {
        GalleryModel::from_name(&self.model, m).expect("validated")
    }
}

/// `a.b.c=value`; the value is read as a TOML literal, falling back to a bare string.
fn apply_override(table: &mut toml::Table, o: &str) -> Result<(), ConfigError> {
    let (key, value) = o
        .split_once('=')
        .ok_or_else(|| ConfigError::Override(o.to_string()))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(ConfigError::Override(o.to_string()));
    }
    let value = value.trim();
    let parsed = format!("v = {value}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(value.to_string()));
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().expect("split yields one part");
    let mut cur = table;
    for p in parts {
        let entry = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| ConfigError::Override(format!("{o} ({p} is not a table)")))?;
    }
    cur.insert(last.to_string(), parsed);
    Ok(())
}
