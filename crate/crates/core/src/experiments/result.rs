use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::rng::GENERATOR;

/// Named scalar outputs in insertion order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Metrics(Vec<(String, f64)>);

impl Metrics {
    pub fn push(&mut self, name: impl Into<String>, value: f64) {
        self.0.push((name.into(), value));
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(String, f64)> {
        self.0.iter()
    }
}

impl Serialize for Metrics {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `value < tolerance`
    Below,
    /// `value > tolerance`
    Above,
    /// `|value - target| <= tolerance`
    Near,
}

/// One named acceptance check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Verdict {
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, target: None, tolerance, relation: Relation::Below, pass: value < tolerance }
    }

    pub fn above(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, target: None, tolerance: threshold, relation: Relation::Above, pass: value > threshold }
    }

    pub fn near(name: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            target: Some(target),
            tolerance,
            relation: Relation::Near,
            pass: (value - target).abs() <= tolerance,
        }
    }

    /// The same check judged against a different tolerance (or threshold).
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = match self.relation {
            Relation::Below => self.value < tolerance,
            Relation::Above => self.value > tolerance,
            Relation::Near => self.target.is_some_and(|t| (self.value - t).abs() <= tolerance),
        };
        self
    }

    /// A yes/no check recorded as value 1 (true) or 0 (false).
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::near(name, if ok { 1.0 } else { 0.0 }, 1.0, 0.0)
    }
}

/// Sampled density on a uniform abscissa.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityTable {
    pub x_label: String,
    pub x: Vec<f64>,
    pub density: Vec<f64>,
}

impl DensityTable {
    /// Riemann sum with the (uniform) sample spacing.
    pub fn integral(&self) -> f64 {
        if self.x.len() < 2 {
            return 0.0;
        }
        let h = (self.x[self.x.len() - 1] - self.x[0]) / (self.x.len() - 1) as f64;
        self.density.iter().sum::<f64>() * h
    }
}

/// Estimate of a weak value from pointer readings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakValueEstimate {
    pub name: String,
    /// `⟨fin|A|in⟩/⟨fin|in⟩`, real part.
    pub exact_re: f64,
    pub exact_im: f64,
    /// Pointer shift divided by the coupling.
    pub estimate: f64,
    pub std_error: f64,
    /// 95% interval `estimate ± 1.96 std_error`.
    pub ci_low: f64,
    pub ci_high: f64,
}

impl WeakValueEstimate {
    pub fn new(name: impl Into<String>, exact_re: f64, exact_im: f64, estimate: f64, std_error: f64) -> Self {
        Self {
            name: name.into(),
            exact_re,
            exact_im,
            estimate,
            std_error,
            ci_low: estimate - 1.96 * std_error,
            ci_high: estimate + 1.96 * std_error,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub experiment: String,
    pub seed: u64,
    pub version: String,
    pub generator: String,
    pub conventions: Vec<String>,
}

/// Everything an experiment reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub experiment: String,
    pub metrics: Metrics,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub weak_values: Vec<WeakValueEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub postselect_log_prob: Option<f64>,
    #[serde(skip)]
    pub density: Option<DensityTable>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub provenance: Provenance,
}

pub(crate) const UNITS: &str = "natural units, hbar = 1; modular momentum period 2*pi/D";

impl ExperimentResult {
    pub fn new(experiment: &str, seed: u64) -> Self {
        Self {
            experiment: experiment.to_string(),
            metrics: Metrics::default(),
            verdicts: Vec::new(),
            weak_values: Vec::new(),
            postselect_log_prob: None,
            density: None,
            warnings: Vec::new(),
            provenance: Provenance {
                experiment: experiment.to_string(),
                seed,
                version: env!("CARGO_PKG_VERSION").to_string(),
                generator: GENERATOR.to_string(),
                conventions: vec![UNITS.to_string()],
            },
        }
    }

    pub fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.push(name, value);
    }

    pub fn verdict(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn convention(&mut self, text: impl Into<String>) {
        self.provenance.conventions.push(text.into());
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }

    /// Appends another result's verdicts and metrics under a prefix.
    pub fn absorb(&mut self, prefix: &str, other: ExperimentResult) {
        for (k, v) in other.metrics.iter() {
            self.metrics.push(format!("{prefix}.{k}"), *v);
        }
        for mut v in other.verdicts {
            v.name = format!("{prefix}.{}", v.name);
            self.verdicts.push(v);
        }
        self.warnings.extend(other.warnings.into_iter().map(|w| format!("{prefix}: {w}")));
    }
}
