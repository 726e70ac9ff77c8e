//! Classifiers and the on-disk model artifact.

mod forest;
mod svc;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use forest::{gini, DecisionTree, ForestParams, Node, RandomForest};
pub use svc::{LinearSvc, SvcParams};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::schema_hash;
use crate::pipeline::FittedPipeline;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: Label,
    /// Margin for the SVC, vote fraction of `label` for the forest.
    pub score: f64,
}

pub(crate) fn check_training_data(x: &[Vec<f64>], y: &[Label]) -> Result<usize> {
    if x.is_empty() {
        return Err(Error::InvalidTrainingData("no training rows".into()));
    }
    if x.len() != y.len() {
        return Err(Error::InvalidTrainingData(format!(
            "{} rows but {} labels",
            x.len(),
            y.len()
        )));
    }
    let p = x[0].len();
    if p == 0 {
        return Err(Error::InvalidTrainingData("rows have no columns".into()));
    }
    for row in x {
        if row.len() != p {
            return Err(Error::DimensionMismatch {
                expected: p,
                actual: row.len(),
            });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidTrainingData("non-finite value in training matrix".into()));
        }
    }
    if !Label::ALL.iter().all(|l| y.contains(l)) {
        return Err(Error::InvalidTrainingData("both classes must be present".into()));
    }
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "rf")]
    RandomForest,
    #[serde(rename = "lsvc")]
    LinearSvc,
}

impl ModelKind {
    pub const ALL: [ModelKind; 2] = [ModelKind::RandomForest, ModelKind::LinearSvc];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::RandomForest => "rf",
            ModelKind::LinearSvc => "lsvc",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            ModelKind::RandomForest => "RF",
            ModelKind::LinearSvc => "LSVC",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_lowercase().as_str() {
            "rf" | "forest" | "random-forest" => Ok(ModelKind::RandomForest),
            "lsvc" | "svc" | "linear-svc" => Ok(ModelKind::LinearSvc),
            other => Err(format!("unknown model kind `{other}` (expected rf or lsvc)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    LinearSvc(LinearSvc),
    RandomForest(RandomForest),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::LinearSvc(_) => ModelKind::LinearSvc,
            Model::RandomForest(_) => ModelKind::RandomForest,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Model::LinearSvc(m) => m.dim(),
            Model::RandomForest(m) => m.dim(),
        }
    }

    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        match self {
            Model::LinearSvc(m) => m.predict(x),
            Model::RandomForest(m) => m.predict(x),
        }
    }
}

pub const FORMAT_VERSION: &str = "agelex-model/1";

/// A trained classifier with everything needed to turn raw text into its input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub format_version: String,
    pub schema_hash: String,
    pub pipeline: FittedPipeline,
    pub model: Model,
}

impl ModelArtifact {
    pub fn new(pipeline: FittedPipeline, model: Model) -> Result<Self> {
        if pipeline.output_dim() != model.dim() {
            return Err(Error::DimensionMismatch {
                expected: pipeline.output_dim(),
                actual: model.dim(),
            });
        }
        Ok(ModelArtifact {
            format_version: FORMAT_VERSION.to_string(),
            schema_hash: schema_hash(),
            pipeline,
            model,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("artifact serializes")
    }

    /// Checks the version before decoding the rest, so an artifact from another
    /// format version is reported as such rather than as a parse error.
    pub fn from_json(data: &str, source_name: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Header {
            format_version: String,
        }
        let header: Header = serde_json::from_str(data)
            .map_err(|e| Error::parse(source_name, e.line(), e.to_string()))?;
        if header.format_version != FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                expected: FORMAT_VERSION.to_string(),
                found: header.format_version,
            });
        }
        let artifact: ModelArtifact = serde_json::from_str(data)
            .map_err(|e| Error::parse(source_name, e.line(), e.to_string()))?;
        if artifact.pipeline.output_dim() != artifact.model.dim() {
            return Err(Error::DimensionMismatch {
                expected: artifact.pipeline.output_dim(),
                actual: artifact.model.dim(),
            });
        }
        Ok(artifact)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let data = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&data, &path.display().to_string())
    }

    /// Fails when the artifact was built against a different feature layout.
    pub fn check_schema(&self) -> Result<()> {
        let current = schema_hash();
        if self.schema_hash == current {
            Ok(())
        } else {
            Err(Error::SchemaMismatch {
                artifact: self.schema_hash.clone(),
                current,
            })
        }
    }
}
