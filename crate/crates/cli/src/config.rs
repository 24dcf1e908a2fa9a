use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context as _, Result};
use entrocon::photonlab::{Mode, NoiseModel, ShotPlan, DEFAULT_RESAMPLES, DEFAULT_SHOTS};
use entrocon::qcore::CatalogState;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Everything `run` needs. Serializes to TOML with the same field names
/// as the command-line flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// State labels, or `["all"]`.
    pub states: Vec<String>,
    pub shots: u64,
    pub seed: u64,
    pub noise: NoiseModel,
    pub mode: Mode,
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub resamples: usize,
    /// Worker threads; unset uses all cores. Never affects the output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            states: vec!["all".into()],
            shots: DEFAULT_SHOTS,
            seed: 0,
            noise: NoiseModel::calibrated_default(),
            mode: Mode::Sampled,
            format: Format::Csv,
            output: None,
            resamples: DEFAULT_RESAMPLES,
            threads: None,
        }
    }
}

impl RunConfig {
    pub fn resolve_states(&self) -> Result<Vec<CatalogState>> {
        if self.states.is_empty() {
            bail!("no states selected");
        }
        if self.states.len() == 1 && self.states[0].trim().eq_ignore_ascii_case("all") {
            return Ok(CatalogState::all().collect());
        }
        self.states
            .iter()
            .map(|s| CatalogState::from_str(s).with_context(|| format!("invalid state label {s:?}")))
            .collect()
    }

    pub fn plan(&self) -> Result<ShotPlan> {
        Ok(ShotPlan::new(self.shots, self.resamples, self.seed)?)
    }

    /// Checks every field before anything runs.
    pub fn validate(&self) -> Result<()> {
        self.resolve_states()?;
        self.plan()?;
        self.noise.validate()?;
        if self.threads == Some(0) {
            bail!("threads must be at least 1");
        }
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Values present in the file replace the corresponding fields.
    pub fn overlay_file(&self, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.overlay(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn overlay(&self, text: &str) -> Result<Self> {
        let mut base: toml::Table = toml::from_str(&self.to_toml()?)?;
        let patch: toml::Table = toml::from_str(text)?;
        for (k, v) in patch {
            base.insert(k, v);
        }
        Ok(base.try_into()?)
    }
}
