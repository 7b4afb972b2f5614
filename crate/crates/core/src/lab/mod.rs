//! Randomized experiments around the preserver theorems.
//!
//! Trials draw from per-trial RNG streams and run in parallel; reports are
//! assembled in trial order, so a `(config, seed)` pair always produces the
//! same report.

pub mod dpi;
pub mod preservation;
pub mod probes;
pub mod report;
pub mod samplers;
pub mod theorems;
pub mod transform;

use serde::{Deserialize, Serialize};

use crate::divergences::RenyiParameter;
use crate::error::{Error, Result};
use crate::opfunc;

pub use dpi::{dpi_check, dpi_random_channels, ChannelSpec};
pub use preservation::{test_preservation, DivergenceSelector};
pub use probes::{chaotic_characterization, lemma1_probe, sandwich_check, Lemma1Probe, NormKind, ScalarMap};
pub use report::{ExperimentReport, TrialRecord, Verdict, Witness};
pub use theorems::{verify_theorem1, verify_theorem2, verify_theorem3};
pub use transform::{apply_transform, TransformSpec};

/// Experiment config as read by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// `theorem1 | theorem2 | theorem3 | chaotic | lemma1 | sandwich | dpi`.
    pub experiment: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    /// For `dpi`: `standard` or `maximal`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divergence: Option<String>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_trials() -> usize {
    100
}

fn default_tol() -> f64 {
    1e-8
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("experiment config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=16).contains(&self.dim) {
            return Err(Error::InvalidInput(format!("dim must lie in 1..=16, got {}", self.dim)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidInput(format!("tol must be positive, got {}", self.tol)));
        }
        let needs_alpha = matches!(self.experiment.as_str(), "theorem1" | "chaotic");
        let needs_f = matches!(self.experiment.as_str(), "theorem2" | "dpi");
        match self.experiment.as_str() {
            "theorem1" | "theorem2" | "theorem3" | "chaotic" | "lemma1" | "sandwich" | "dpi" => {}
            other => return Err(Error::InvalidInput(format!("unknown experiment `{other}`"))),
        }
        if needs_alpha {
            RenyiParameter::new(self.alpha.ok_or_else(|| Error::InvalidInput(format!("`{}` requires alpha", self.experiment)))?)?;
        } else if self.alpha.is_some() {
            return Err(Error::InvalidInput(format!("`{}` does not take alpha", self.experiment)));
        }
        if needs_f {
            opfunc::builtin(self.f.as_deref().ok_or_else(|| Error::InvalidInput(format!("`{}` requires f", self.experiment)))?)?;
        } else if self.f.is_some() {
            return Err(Error::InvalidInput(format!("`{}` does not take f", self.experiment)));
        }
        if self.experiment == "dpi" {
            match self.divergence.as_deref() {
                Some("standard") | Some("maximal") => {}
                _ => return Err(Error::InvalidInput("`dpi` requires divergence standard or maximal".into())),
            }
        } else if self.divergence.is_some() {
            return Err(Error::InvalidInput(format!("`{}` does not take divergence", self.experiment)));
        }
        Ok(())
    }
}

pub fn run_experiment(c: &ExperimentConfig) -> Result<ExperimentReport> {
    c.validate()?;
    match c.experiment.as_str() {
        "theorem1" => verify_theorem1(c.dim, c.alpha.expect("validated"), c.seed, c.trials, c.tol),
        "theorem2" => verify_theorem2(c.dim, &opfunc::builtin(c.f.as_deref().expect("validated"))?, c.seed, c.trials, c.tol),
        "theorem3" => verify_theorem3(c.dim, c.seed, c.trials, c.tol),
        "chaotic" => probes::chaotic_experiment(c.dim, RenyiParameter::new(c.alpha.expect("validated"))?, c.trials, c.seed, c.tol),
        "lemma1" => probes::lemma1_experiment(c.dim, ScalarMap::Exp, c.trials, c.seed),
        "sandwich" => probes::sandwich_experiment(c.dim, c.trials, c.seed),
        "dpi" => {
            let sel = DivergenceSelector::parse(c.divergence.as_deref().expect("validated"), None, c.f.as_deref())?;
            dpi_random_channels(&sel, c.dim, 3, c.trials, c.seed, c.tol)
        }
        _ => unreachable!("validated"),
    }
}
