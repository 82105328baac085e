//! Run manifests: a small TOML document naming the experiment, its config,
//! the seed, output options and tolerance overrides.
//!
//! ```toml
//! experiment = "gedanken"
//! seed = 42
//!
//! [config]
//! lambda = 0.1
//! slit_open = false
//!
//! [output]
//! dir = "results"
//! format = "both"
//!
//! [tolerances]
//! meter_shift_analytic = 1e-11
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;
use modvar::experiments::{
    ConservationConfig, FlatnessConfig, GratingConfig, MZConfig, Theorem1Config, TwoSlitConfig, ZnConfig,
};
use modvar::rng::DEFAULT_SEED;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Gedanken,
    Mz,
    Theorem1,
    Flatness,
    Grating,
    Ellipse,
    Zn,
    Suite,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Gedanken,
        Experiment::Mz,
        Experiment::Theorem1,
        Experiment::Flatness,
        Experiment::Grating,
        Experiment::Ellipse,
        Experiment::Zn,
        Experiment::Suite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Gedanken => "gedanken",
            Experiment::Mz => "mz",
            Experiment::Theorem1 => "theorem1",
            Experiment::Flatness => "flatness",
            Experiment::Grating => "grating",
            Experiment::Ellipse => "ellipse",
            Experiment::Zn => "zn",
            Experiment::Suite => "suite",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

/// Fully resolved config of one experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ExperimentConfig {
    Gedanken(TwoSlitConfig),
    Mz(MZConfig),
    Theorem1(Theorem1Config),
    Flatness(FlatnessConfig),
    Grating(GratingConfig),
    Ellipse(ConservationConfig),
    Zn(ZnConfig),
    Suite {},
}

impl ExperimentConfig {
    fn default_for(e: Experiment) -> Self {
        match e {
            Experiment::Gedanken => Self::Gedanken(Default::default()),
            Experiment::Mz => Self::Mz(Default::default()),
            Experiment::Theorem1 => Self::Theorem1(Default::default()),
            Experiment::Flatness => Self::Flatness(Default::default()),
            Experiment::Grating => Self::Grating(Default::default()),
            Experiment::Ellipse => Self::Ellipse(Default::default()),
            Experiment::Zn => Self::Zn(Default::default()),
            Experiment::Suite => Self::Suite {},
        }
    }

    fn set_seed(&mut self, seed: u64) {
        match self {
            Self::Gedanken(c) => c.seed = seed,
            Self::Mz(c) => c.seed = seed,
            Self::Theorem1(c) => c.seed = seed,
            Self::Ellipse(c) => c.seed = seed,
            Self::Flatness(_) | Self::Grating(_) | Self::Zn(_) | Self::Suite {} => {}
        }
    }

    fn validate(&self) -> modvar::Result<()> {
        match self {
            Self::Gedanken(c) => c.validate(),
            Self::Mz(c) => c.validate(),
            Self::Theorem1(c) => c.validate(),
            Self::Flatness(c) => c.validate(),
            Self::Grating(c) => c.validate(),
            Self::Ellipse(c) => c.validate(),
            Self::Zn(c) if c.sizes.is_empty() => Err(modvar::Error::Config("sizes must not be empty".into())),
            Self::Zn(_) | Self::Suite {} => Ok(()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub experiment: Experiment,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub output: OutputSpec,
    /// Verdict name to replacement tolerance.
    pub tolerances: BTreeMap<String, f64>,
}

impl RunManifest {
    /// Defaults for `experiment`, as if parsed from an empty manifest.
    pub fn defaults(experiment: Experiment) -> Self {
        let mut config = ExperimentConfig::default_for(experiment);
        config.set_seed(DEFAULT_SEED);
        Self { experiment, seed: DEFAULT_SEED, config, output: OutputSpec::default(), tolerances: BTreeMap::new() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.config.set_seed(seed);
        self
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ManifestError {
    #[error("parse error at line {line}{}: {message}", field.as_ref().map(|f| format!(", field `{f}`")).unwrap_or_default())]
    Parse { line: usize, field: Option<String>, message: String },
    #[error("invalid manifest:\n  - {}", .0.join("\n  - "))]
    Validation(Vec<String>),
}

const TOP_KEYS: [&str; 5] = ["experiment", "seed", "config", "output", "tolerances"];
const OUTPUT_KEYS: [&str; 2] = ["dir", "format"];

/// Parses and validates a manifest. `expected` is the experiment chosen on the
/// command line; the manifest may omit `experiment` then, but must not disagree.
pub fn parse_manifest(text: &str, expected: Option<Experiment>) -> Result<RunManifest, ManifestError> {
    let doc: Table = text.parse().map_err(|e: toml::de::Error| {
        let line = e.span().map(|s| line_of_offset(text, s.start)).unwrap_or(1);
        ManifestError::Parse { line, field: None, message: e.message().trim().to_string() }
    })?;
    let mut errs = Vec::new();
    for key in doc.keys().filter(|k| !TOP_KEYS.contains(&k.as_str())) {
        errs.push(format!("unknown key `{key}`"));
    }

    let experiment = match (doc.get("experiment"), expected) {
        (None, Some(e)) => Some(e),
        (None, None) => {
            errs.push("missing key `experiment`".into());
            None
        }
        (Some(Value::String(s)), want) => match Experiment::from_name(s) {
            Some(e) if want.is_none_or(|w| w == e) => Some(e),
            Some(e) => {
                errs.push(format!("`experiment` is \"{e}\" but the command runs \"{}\"", want.unwrap_or(e)));
                None
            }
            None => {
                let names: Vec<&str> = Experiment::ALL.iter().map(|e| e.name()).collect();
                errs.push(format!("unknown experiment \"{s}\"; expected one of {}", names.join(", ")));
                None
            }
        },
        (Some(_), _) => {
            errs.push("`experiment` must be a string".into());
            None
        }
    };

    let seed = match doc.get("seed") {
        None => DEFAULT_SEED,
        Some(Value::Integer(i)) if *i >= 0 => *i as u64,
        Some(_) => {
            errs.push("`seed` must be a non-negative integer".into());
            DEFAULT_SEED
        }
    };

    let output = parse_output(doc.get("output"), &mut errs);
    let tolerances = parse_tolerances(doc.get("tolerances"), &mut errs);

    let config_table = match doc.get("config") {
        None => Table::new(),
        Some(Value::Table(t)) => t.clone(),
        Some(_) => {
            errs.push("`config` must be a table".into());
            Table::new()
        }
    };
    if let Some(e) = experiment {
        if config_table.contains_key("seed") {
            errs.push("unknown key `config.seed`; set `seed` at the top level".into());
        }
        let reference = default_table(e);
        unknown_keys(&config_table, &reference, "config", &mut errs);
    }
    if !errs.is_empty() {
        return Err(ManifestError::Validation(errs));
    }
    let experiment = experiment.expect("validated above");

    let mut config = decode_config(experiment, config_table, text)?;
    config.set_seed(seed);
    if let Err(e) = config.validate() {
        let msg = match e {
            modvar::Error::Config(m) => m,
            other => other.to_string(),
        };
        return Err(ManifestError::Validation(msg.split("; ").map(|s| format!("config: {s}")).collect()));
    }
    Ok(RunManifest { experiment, seed, config, output, tolerances })
}

fn parse_output(v: Option<&Value>, errs: &mut Vec<String>) -> OutputSpec {
    let mut out = OutputSpec::default();
    let Some(v) = v else { return out };
    let Value::Table(t) = v else {
        errs.push("`output` must be a table".into());
        return out;
    };
    for key in t.keys().filter(|k| !OUTPUT_KEYS.contains(&k.as_str())) {
        errs.push(format!("unknown key `output.{key}`"));
    }
    match t.get("dir") {
        None => {}
        Some(Value::String(s)) => out.dir = Some(PathBuf::from(s)),
        Some(_) => errs.push("`output.dir` must be a string".into()),
    }
    match t.get("format") {
        None => {}
        Some(Value::String(s)) => match Format::from_str(s, false) {
            Ok(f) => out.format = f,
            Err(_) => errs.push(format!("`output.format` must be json, csv or both, got \"{s}\"")),
        },
        Some(_) => errs.push("`output.format` must be a string".into()),
    }
    out
}

fn parse_tolerances(v: Option<&Value>, errs: &mut Vec<String>) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    let Some(v) = v else { return out };
    let Value::Table(t) = v else {
        errs.push("`tolerances` must be a table".into());
        return out;
    };
    for (k, v) in t {
        let tol = match v {
            Value::Float(f) => Some(*f),
            Value::Integer(i) => Some(*i as f64),
            _ => None,
        };
        match tol {
            Some(t) if t.is_finite() && t >= 0.0 => {
                out.insert(k.clone(), t);
            }
            _ => errs.push(format!("`tolerances.{k}` must be a non-negative number")),
        }
    }
    out
}

fn default_table(e: Experiment) -> Table {
    match Value::try_from(ExperimentConfig::default_for(e)) {
        Ok(Value::Table(t)) => t,
        _ => Table::new(),
    }
}

/// Reports every key of `given` absent from `reference`, descending into sub-tables.
fn unknown_keys(given: &Table, reference: &Table, path: &str, errs: &mut Vec<String>) {
    for (k, v) in given {
        if k == "seed" && path == "config" {
            continue;
        }
        match reference.get(k) {
            None => errs.push(format!("unknown key `{path}.{k}`")),
            Some(Value::Table(r)) => {
                if let Value::Table(g) = v {
                    unknown_keys(g, r, &format!("{path}.{k}"), errs);
                }
            }
            Some(_) => {}
        }
    }
}

fn decode_config(e: Experiment, table: Table, text: &str) -> Result<ExperimentConfig, ManifestError> {
    fn de<T: DeserializeOwned>(table: Table, text: &str) -> Result<T, ManifestError> {
        T::deserialize(Value::Table(table.clone())).map_err(|err| {
            let message = err.message().trim().to_string();
            let field = offending_field::<T>(&table);
            let line = field.as_deref().and_then(|f| line_of_key(text, f)).unwrap_or(1);
            ManifestError::Parse { line, field: field.map(|f| format!("config.{f}")), message }
        })
    }
    Ok(match e {
        Experiment::Gedanken => ExperimentConfig::Gedanken(de(table, text)?),
        Experiment::Mz => ExperimentConfig::Mz(de(table, text)?),
        Experiment::Theorem1 => ExperimentConfig::Theorem1(de(table, text)?),
        Experiment::Flatness => ExperimentConfig::Flatness(de(table, text)?),
        Experiment::Grating => ExperimentConfig::Grating(de(table, text)?),
        Experiment::Ellipse => ExperimentConfig::Ellipse(de(table, text)?),
        Experiment::Zn => ExperimentConfig::Zn(de(table, text)?),
        Experiment::Suite => ExperimentConfig::Suite {},
    })
}

/// Finds which key a type error is about. Serde errors on a table do not carry
/// the key, so each entry is decoded alone (all other fields defaulted).
fn offending_field<T: DeserializeOwned>(table: &Table) -> Option<String> {
    table.iter().find_map(|(k, v)| {
        let mut one = Table::new();
        one.insert(k.clone(), v.clone());
        T::deserialize(Value::Table(one)).is_err().then(|| k.clone())
    })
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Line of `key = ...` inside the `[config]` section (or its sub-tables).
fn line_of_key(text: &str, key: &str) -> Option<usize> {
    let mut in_config = false;
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.starts_with('[') {
            in_config = t.trim_start_matches('[').starts_with("config");
            continue;
        }
        if in_config {
            if let Some((k, _)) = t.split_once('=') {
                if k.trim().trim_matches('"') == key {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}
