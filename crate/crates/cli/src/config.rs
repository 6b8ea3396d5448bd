//! Run configuration: one JSON document, every field optional.

use std::path::{Path, PathBuf};

use gorilla_core::bayes::BOConfig;
use gorilla_core::oracle::DEFAULT_TOP_K;
use gorilla_core::task::{EnvConfig, SequenceGenerator, Simulator, CELLS};
use gorilla_core::train::TrainConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TaskVariant {
    /// Each button pressed once, in order; reward `−Σ F_i`.
    #[default]
    ThreeButton,
    /// Sampled press sequences with a frequency-weighted reward.
    Frequency,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrequencySettings {
    pub generator: SequenceGenerator,
    /// Multiplies the weighted effort inside the reward's exponent.
    pub reward_scale: f64,
}

impl Default for FrequencySettings {
    fn default() -> Self {
        FrequencySettings {
            generator: SequenceGenerator::skewed(0.6, 5),
            reward_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareSettings {
    pub trials: usize,
    pub layouts: Vec<String>,
}

impl Default for CompareSettings {
    fn default() -> Self {
        CompareSettings {
            trials: 30,
            layouts: vec!["static".into(), "rl".into(), "bo".into()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub task: TaskVariant,
    /// Button count of the sequential task.
    pub buttons: usize,
    pub env: EnvConfig,
    pub train: TrainConfig,
    pub bo: BOConfig,
    pub frequency: FrequencySettings,
    /// Exactly simulated shortlist of the two-stage oracle.
    pub oracle_top_k: usize,
    pub compare: CompareSettings,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            task: TaskVariant::default(),
            buttons: 3,
            env: EnvConfig::default(),
            train: TrainConfig::default(),
            bo: BOConfig::default(),
            frequency: FrequencySettings::default(),
            oracle_top_k: DEFAULT_TOP_K,
            compare: CompareSettings::default(),
            out: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    /// Reads `path`, or returns the defaults when there is none.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| CliError::ConfigParse {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn validate(&self) -> Result<()> {
        Simulator::new(self.env.clone())?;
        self.train.validate()?;
        self.bo.validate()?;
        self.frequency.generator.validate()?;
        if self.buttons == 0 || self.buttons > CELLS {
            return Err(CliError::Usage(format!(
                "button count must lie in 1..={CELLS}, got {}",
                self.buttons
            )));
        }
        if !(self.frequency.reward_scale > 0.0 && self.frequency.reward_scale.is_finite()) {
            return Err(CliError::Usage("frequency reward scale must be positive".into()));
        }
        if self.oracle_top_k == 0 {
            return Err(CliError::Usage("oracle_top_k must be positive".into()));
        }
        if self.compare.trials == 0 {
            return Err(CliError::Usage("compare needs at least one trial".into()));
        }
        Ok(())
    }

    pub fn simulator(&self) -> Result<Simulator> {
        Ok(Simulator::new(self.env.clone())?)
    }

    /// Buttons of the configured task variant.
    pub fn task_buttons(&self) -> usize {
        match self.task {
            TaskVariant::ThreeButton => self.buttons,
            TaskVariant::Frequency => self.frequency.generator.buttons(),
        }
    }
}
