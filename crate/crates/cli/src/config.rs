//! The experiment config file: one JSON document naming the pipeline
//! settings and the model files they need. Relative model paths resolve
//! against the config file's directory, so a config travels with its models.
//!
//! Config syntax problems (bad JSON, unknown variant names, invalid
//! settings) are usage errors; missing or unreadable model files are data
//! errors.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use sumtrim::error::Error as CoreError;
use sumtrim::learners::{CrfModel, MaxEntModel};
use sumtrim::lm::NGramModel;
use sumtrim::pipeline::{ModelSet, PipelineConfig};
use sumtrim::ranking::RankerModel;
use sumtrim::scorers::ScorerWeights;

#[derive(Debug, Deserialize)]
pub struct ConfigFile {
    #[serde(flatten)]
    pipeline: PipelineConfig,
    #[serde(default)]
    ranker_model: Option<PathBuf>,
    #[serde(default)]
    maxent_model: Option<PathBuf>,
    #[serde(default)]
    crf_model: Option<PathBuf>,
    #[serde(default)]
    lm_model: Option<PathBuf>,
    #[serde(default)]
    weights: Option<PathBuf>,
}

pub struct RunConfig {
    pub pipeline: PipelineConfig,
    pub models: ModelSet,
}

fn resolve(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}

/// Parse and validate the config document itself.
pub fn parse(path: &Path) -> Result<(ConfigFile, PathBuf), CoreError> {
    let text = std::fs::read_to_string(path).map_err(|e| CoreError::io(path, e))?;
    let parsed: ConfigFile = serde_json::from_str(&text)
        .map_err(|e| CoreError::format(path, e.line(), e.to_string()))?;
    parsed.pipeline.validate()?;
    let base = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."))
        .to_path_buf();
    Ok((parsed, base))
}

impl ConfigFile {
    /// Load the referenced model files.
    pub fn into_run(self, base: &Path) -> Result<RunConfig, CoreError> {
        let mut models = ModelSet::default();
        if let Some(p) = &self.ranker_model {
            models.ranker = Some(RankerModel::load(resolve(base, p))?);
        }
        if let Some(p) = &self.maxent_model {
            models.maxent = Some(MaxEntModel::load(resolve(base, p))?);
        }
        if let Some(p) = &self.crf_model {
            models.crf = Some(CrfModel::load(resolve(base, p))?);
        }
        if let Some(p) = &self.lm_model {
            models.lm = Some(NGramModel::load(resolve(base, p))?);
        }
        if let Some(p) = &self.weights {
            let wpath = resolve(base, p);
            let text = std::fs::read_to_string(&wpath).map_err(|e| CoreError::io(&wpath, e))?;
            let weights: ScorerWeights = serde_json::from_str(&text)
                .map_err(|e| CoreError::format(&wpath, e.line(), e.to_string()))?;
            weights.validate()?;
            models.weights = Some(weights);
        }
        Ok(RunConfig {
            pipeline: self.pipeline,
            models,
        })
    }
}
