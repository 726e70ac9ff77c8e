use std::path::{Path, PathBuf};

use agelex::analysis::{RangeMode, DEFAULT_INTERVALS};
use agelex::corpus::Label;
use agelex::features::Family;
use agelex::models::ModelKind;
use agelex::resources::ResourcePaths;
use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

/// Settings shared by every command. Loaded from TOML, then overridden by flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub out: PathBuf,
    pub model: ModelKind,
    /// Model artifact written by `train` and read by `evaluate` and `classify`.
    pub artifact: Option<PathBuf>,
    pub tfidf: bool,
    pub abstracts: bool,
    pub families: Vec<Family>,
    pub seed: u64,
    pub n_intervals: usize,
    pub range_mode: RangeMode,
    pub positive: Label,
    pub n_trees: usize,
    pub svd_for_svc: bool,
    pub resources: Option<ResourcePaths>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: None,
            out: PathBuf::from("out"),
            model: ModelKind::LinearSvc,
            artifact: None,
            tfidf: true,
            abstracts: false,
            families: Vec::new(),
            seed: 42,
            n_intervals: DEFAULT_INTERVALS,
            range_mode: RangeMode::Pooled,
            positive: Label::Children,
            n_trees: 100,
            svd_for_svc: true,
            resources: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn corpus(&self) -> Result<&Path> {
        match &self.corpus {
            Some(p) if p.exists() => Ok(p),
            Some(p) => bail!("corpus file {} does not exist", p.display()),
            None => bail!("no corpus given (use --corpus or `corpus` in the config)"),
        }
    }

    pub fn resources(&self) -> Result<&ResourcePaths> {
        let Some(r) = &self.resources else {
            bail!("no resources given (use --resources or a [resources] table in the config)");
        };
        let required = [&r.frequency, &r.sentiment, &r.stopwords, &r.top5000, &r.familiar];
        let optional = [&r.morphology, &r.coefficients, &r.abbreviations];
        for p in required.into_iter().chain(optional.into_iter().flatten()) {
            if !p.exists() {
                bail!("resource file {} does not exist", p.display());
            }
        }
        Ok(r)
    }

    pub fn artifact_path(&self) -> PathBuf {
        self.artifact
            .clone()
            .unwrap_or_else(|| self.out.join(format!("model-{}.json", self.model)))
    }
}

/// Loads a standalone resource manifest, i.e. the body of a `[resources]` table.
pub fn load_resource_paths(path: &Path) -> Result<ResourcePaths> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading resources {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing resources {}", path.display()))
}
