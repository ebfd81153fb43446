//! Structured results shared by every experiment.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Bumped whenever the serialized layout of [`VerificationReport`] changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Violated,
    Inconclusive,
}

/// How a number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ExactFormula,
    QuadratureWithError,
    McWithStderr,
}

impl Provenance {
    pub fn label(&self) -> &'static str {
        match self {
            Provenance::ExactFormula => "exact-formula",
            Provenance::QuadratureWithError => "quadrature-with-error",
            Provenance::McWithStderr => "mc-with-stderr",
        }
    }
}

/// One measured value. `series` groups samples that belong to one curve
/// (a ladder stratum, a value of p, ...), `input` is the abscissa.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub series: String,
    pub input: f64,
    pub value: f64,
    pub error: Option<f64>,
    pub provenance: Provenance,
    /// The underlying integral diverges; `value` is a truncated partial sum.
    #[serde(default)]
    pub divergent: bool,
}

impl Sample {
    pub fn exact(series: impl Into<String>, input: f64, value: f64) -> Self {
        Self {
            series: series.into(),
            input,
            value,
            error: None,
            provenance: Provenance::ExactFormula,
            divergent: false,
        }
    }

    pub fn quadrature(series: impl Into<String>, input: f64, value: f64, error: f64) -> Self {
        Self {
            series: series.into(),
            input,
            value,
            error: Some(error),
            provenance: Provenance::QuadratureWithError,
            divergent: false,
        }
    }

    pub fn mark_divergent(mut self) -> Self {
        self.divergent = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub experiment: String,
    pub parameters: BTreeMap<String, Value>,
    pub samples: Vec<Sample>,
    pub fitted_exponent: Option<f64>,
    pub bound_constant: Option<f64>,
    /// Named quantities measured by the experiment, beyond the headline
    /// exponent and constant.
    pub derived: BTreeMap<String, Value>,
    pub verdict: Verdict,
    /// What the theory predicts for this configuration, when it predicts
    /// anything. A violation that was predicted is not a failure.
    pub expected: Option<Verdict>,
    pub tolerance: f64,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(experiment: impl Into<String>, tolerance: f64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment: experiment.into(),
            parameters: BTreeMap::new(),
            samples: Vec::new(),
            fitted_exponent: None,
            bound_constant: None,
            derived: BTreeMap::new(),
            verdict: Verdict::Inconclusive,
            expected: None,
            tolerance,
            notes: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.parameters.insert(key.to_string(), v);
        self
    }

    pub fn derive(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.derived.insert(key.to_string(), v);
        self
    }

    pub fn note(&mut self, msg: impl Into<String>) -> &mut Self {
        self.notes.push(msg.into());
        self
    }

    /// Consistent, or a violation the theory predicts.
    pub fn matches_expectation(&self) -> bool {
        match self.verdict {
            Verdict::Consistent => true,
            Verdict::Violated => self.expected == Some(Verdict::Violated),
            Verdict::Inconclusive => false,
        }
    }

    pub fn series<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Sample> + 'a {
        self.samples.iter().filter(move |s| s.series == name)
    }
}
