//! Training, evaluation and the ablation grid over feature conditions.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{metrics, MetricsReport};
use crate::corpus::{Document, Label};
use crate::error::{Error, Result};
use crate::features::{Extraction, Family};
use crate::models::{ForestParams, LinearSvc, Model, ModelArtifact, ModelKind, Prediction, RandomForest, SvcParams};
use crate::pipeline::{FittedPipeline, PipelineConfig, PreparedDoc};
use crate::resources::Resources;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelParams {
    pub svc: SvcParams,
    pub forest: ForestParams,
    /// Project LSVC inputs onto the leading SVD components.
    pub svd_for_svc: bool,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            svc: SvcParams::default(),
            forest: ForestParams::default(),
            svd_for_svc: true,
        }
    }
}

impl ModelParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.svc.seed = seed;
        self.forest.seed = seed;
        self
    }
}

pub fn train_model(kind: ModelKind, x: &[Vec<f64>], y: &[Label], params: &ModelParams) -> Result<Model> {
    Ok(match kind {
        ModelKind::LinearSvc => Model::LinearSvc(LinearSvc::train(x, y, &params.svc)?),
        ModelKind::RandomForest => Model::RandomForest(RandomForest::train(x, y, &params.forest)?),
    })
}

/// Fits the pipeline and the model on prepared training documents. SVD is
/// switched on for the LSVC when `params.svd_for_svc` is set and never used
/// for the forest.
pub fn train(
    kind: ModelKind,
    pipeline: &PipelineConfig,
    docs: &[&PreparedDoc],
    labels: &[Label],
    params: &ModelParams,
) -> Result<ModelArtifact> {
    let mut config = pipeline.clone();
    config.svd = kind == ModelKind::LinearSvc && params.svd_for_svc;
    let (fitted, rows) = FittedPipeline::fit(&config, docs)?;
    let model = train_model(kind, &rows, labels, params)?;
    ModelArtifact::new(fitted, model)
}

pub fn predict(artifact: &ModelArtifact, docs: &[&PreparedDoc]) -> Result<Vec<Prediction>> {
    docs.par_iter()
        .map(|d| artifact.model.predict(&artifact.pipeline.transform(d)?))
        .collect()
}

pub fn evaluate(
    artifact: &ModelArtifact,
    docs: &[&PreparedDoc],
    labels: &[Label],
    positive: Label,
) -> Result<MetricsReport> {
    let predicted: Vec<Label> = predict(artifact, docs)?.into_iter().map(|p| p.label).collect();
    metrics(&predicted, labels, positive)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub prediction: Prediction,
    pub extraction: Extraction,
}

/// Classifies one document after checking the artifact's feature schema.
pub fn classify(artifact: &ModelArtifact, doc: &Document, res: &Resources) -> Result<Classification> {
    artifact.check_schema()?;
    let prepared = PreparedDoc::prepare(doc, res, artifact.pipeline.config.fragment_len)?;
    let prediction = artifact.model.predict(&artifact.pipeline.transform(&prepared)?)?;
    Ok(Classification {
        prediction,
        extraction: Extraction {
            features: crate::features::FeatureVector {
                names: crate::features::FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
                values: prepared.features,
            },
            warnings: prepared.warnings,
        },
    })
}

/// One row group of the grid: which inputs feed the classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub tfidf: bool,
    pub abstracts: bool,
    pub families: Vec<Family>,
}

impl Condition {
    fn new(name: impl Into<String>, tfidf: bool, abstracts: bool, families: Vec<Family>) -> Self {
        Condition {
            name: name.into(),
            tfidf,
            abstracts,
            families,
        }
    }

    pub fn pipeline(&self, base: &PipelineConfig) -> PipelineConfig {
        PipelineConfig {
            tfidf: self.tfidf,
            abstracts: self.abstracts,
            families: self.families.clone(),
            ..base.clone()
        }
    }
}

pub const BASELINE: &str = "baseline";
pub const BASELINE_ALL: &str = "baseline + all features";

fn family_label(f: Family) -> &'static str {
    match f {
        Family::Publishing => "age rating",
        other => other.as_str(),
    }
}

/// Conditions in report order for the enabled families:
///
/// * baseline (TF-IDF of the preview)
/// * baseline plus each family, and each family alone
/// * baseline with abstracts, and with abstracts plus age rating
/// * baseline plus every family and abstracts, every family alone, and
///   baseline plus the text families only
pub fn grid_conditions(enabled: &[Family]) -> Result<Vec<Condition>> {
    let mut enabled = enabled.to_vec();
    enabled.sort();
    enabled.dedup();
    if enabled.is_empty() {
        return Err(Error::Config(
            "family-only conditions need at least one enabled feature family".into(),
        ));
    }
    let mut out = vec![Condition::new(BASELINE, true, false, vec![])];
    for &f in &enabled {
        out.push(Condition::new(format!("baseline + {}", family_label(f)), true, false, vec![f]));
    }
    for &f in &enabled {
        out.push(Condition::new(family_label(f), false, false, vec![f]));
    }
    out.push(Condition::new("baseline + abstracts", true, true, vec![]));
    if enabled.contains(&Family::Publishing) {
        out.push(Condition::new("baseline + publishing", true, true, vec![Family::Publishing]));
    }
    out.push(Condition::new(BASELINE_ALL, true, true, enabled.clone()));
    out.push(Condition::new("all features", false, false, enabled.clone()));
    let text: Vec<Family> = enabled.iter().copied().filter(|&f| f != Family::Publishing).collect();
    if !text.is_empty() && text.len() != enabled.len() {
        out.push(Condition::new("baseline + all features except publishing", true, false, text));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub model: ModelKind,
    pub condition: String,
    pub metrics: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub rows: Vec<GridRow>,
}

impl GridReport {
    pub fn get(&self, model: ModelKind, condition: &str) -> Option<&MetricsReport> {
        self.rows
            .iter()
            .find(|r| r.model == model && r.condition == condition)
            .map(|r| &r.metrics)
    }

    /// Percentages with two decimals, one row per model and condition.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("model\tcondition\tpositive_class\taccuracy\tf1\tprecision\trecall\n");
        for r in &self.rows {
            let m = &r.metrics;
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{:.2}\t{:.2}\t{:.2}\t{:.2}",
                r.model.display_name(),
                r.condition,
                m.positive,
                m.accuracy * 100.0,
                m.f1 * 100.0,
                m.precision * 100.0,
                m.recall * 100.0
            );
        }
        out
    }
}

pub struct GridData<'a> {
    pub train: &'a [&'a PreparedDoc],
    pub train_labels: &'a [Label],
    pub test: &'a [&'a PreparedDoc],
    pub test_labels: &'a [Label],
}

/// Runs every model on every condition. Runs execute in parallel; the report
/// lists models in [`ModelKind::ALL`] order, conditions in the given order.
pub fn run_grid(
    data: &GridData<'_>,
    conditions: &[Condition],
    base: &PipelineConfig,
    params: &ModelParams,
    positive: Label,
) -> Result<GridReport> {
    let jobs: Vec<(ModelKind, &Condition)> = ModelKind::ALL
        .iter()
        .flat_map(|&k| conditions.iter().map(move |c| (k, c)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(kind, cond)| {
            let run = || -> Result<MetricsReport> {
                let artifact = train(kind, &cond.pipeline(base), data.train, data.train_labels, params)?;
                evaluate(&artifact, data.test, data.test_labels, positive)
            };
            run()
                .map(|metrics| GridRow {
                    model: kind,
                    condition: cond.name.clone(),
                    metrics,
                })
                .map_err(|e| Error::Condition {
                    condition: format!("{} {}", kind.display_name(), cond.name),
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GridReport { rows })
}
