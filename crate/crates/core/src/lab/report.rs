//! Experiment reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ext::{f64_ext, ExtendedReal};
use crate::json::MatrixJson;
use crate::linalg::PsdMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Preserved,
    Violated,
    Inconclusive,
}

/// Matrices that reproduce a violation, keyed by role (`"a"`, `"b"`, ...).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub matrices: BTreeMap<String, MatrixJson>,
    #[serde(with = "f64_ext")]
    pub deviation: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
}

impl Witness {
    pub fn pair(a: &PsdMatrix, b: &PsdMatrix, deviation: f64) -> Self {
        let mut matrices = BTreeMap::new();
        matrices.insert("a".to_string(), MatrixJson::from_matrix(a.matrix()));
        matrices.insert("b".to_string(), MatrixJson::from_matrix(b.matrix()));
        Self { matrices, deviation, params: BTreeMap::new() }
    }

    pub fn matrix(&self, key: &str) -> Option<&MatrixJson> {
        self.matrices.get(key)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub deviation: ExtendedReal,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_deviation: Option<ExtendedReal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TrialRecord {
    pub fn new(trial: usize, deviation: f64) -> Self {
        Self { trial, deviation: ext(deviation), relative_deviation: None, note: None }
    }
}

pub(crate) fn ext(x: f64) -> ExtendedReal {
    ExtendedReal::from_f64(x).unwrap_or(ExtendedReal::PosInf)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub dim: usize,
    pub seed: u64,
    pub trials: usize,
    #[serde(with = "f64_ext")]
    pub max_deviation: f64,
    pub verdict: Verdict,
    /// Verdict the theory predicts for this experiment.
    pub expected: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<TrialRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ExperimentReport>,
}

impl ExperimentReport {
    pub fn new(experiment: impl Into<String>, dim: usize, seed: u64, trials: usize, expected: Verdict) -> Self {
        Self {
            experiment: experiment.into(),
            dim,
            seed,
            trials,
            max_deviation: 0.0,
            verdict: Verdict::Inconclusive,
            expected,
            witness: None,
            metrics: BTreeMap::new(),
            records: Vec::new(),
            children: Vec::new(),
        }
    }

    /// This report and all children reached their expected verdicts.
    pub fn meets_expectation(&self) -> bool {
        self.verdict == self.expected && self.children.iter().all(|c| c.meets_expectation())
    }

    /// Aggregates children: deviation is the max over children, verdict is
    /// `expected` when every child met its expectation.
    pub fn from_children(
        experiment: impl Into<String>,
        dim: usize,
        seed: u64,
        expected: Verdict,
        children: Vec<ExperimentReport>,
    ) -> Self {
        let mut r = Self::new(experiment, dim, seed, children.iter().map(|c| c.trials).sum(), expected);
        r.max_deviation = children.iter().map(|c| c.max_deviation).fold(0.0, f64::max);
        r.verdict = if children.iter().all(|c| c.meets_expectation()) {
            expected
        } else if children.iter().any(|c| c.verdict == Verdict::Inconclusive) {
            Verdict::Inconclusive
        } else {
            match expected {
                Verdict::Preserved => Verdict::Violated,
                _ => Verdict::Preserved,
            }
        };
        r.children = children;
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per report node.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(0, &mut out);
        out
    }

    fn write_text(&self, depth: usize, out: &mut String) {
        let verdict = |v: Verdict| match v {
            Verdict::Preserved => "preserved",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        };
        out.push_str(&format!(
            "{}{} dim={} trials={} max_dev={} verdict={} expected={}{}\n",
            "  ".repeat(depth),
            self.experiment,
            self.dim,
            self.trials,
            ext(self.max_deviation),
            verdict(self.verdict),
            verdict(self.expected),
            if self.meets_expectation() { "" } else { "  <-- unexpected" },
        ));
        for c in &self.children {
            c.write_text(depth + 1, out);
        }
    }
}
