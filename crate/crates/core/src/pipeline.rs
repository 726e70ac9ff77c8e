//! Turns documents into classifier input rows.
//!
//! A row is the dense TF-IDF vector of the leading fragment (when enabled)
//! followed by the min-max scaled columns of the selected feature families.
//! An optional SVD projection is applied to the concatenation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::features::{extract_all, family_names, select_families, ExtractionWarning, Family};
use crate::resources::Resources;
use crate::vectorizer::{
    augment_with_abstract, fragment, preprocess, Scaler, SvdModel, TfidfModel, FRAGMENT_LEN,
    VARIANCE_TARGET, VOCABULARY_SIZE,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub tfidf: bool,
    /// Build TF-IDF over the preview plus the abstract.
    pub abstracts: bool,
    pub families: Vec<Family>,
    pub svd: bool,
    pub fragment_len: usize,
    pub vocabulary_size: usize,
    pub variance_target: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            tfidf: true,
            abstracts: false,
            families: Vec::new(),
            svd: false,
            fragment_len: FRAGMENT_LEN,
            vocabulary_size: VOCABULARY_SIZE,
            variance_target: VARIANCE_TARGET,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.tfidf && self.families.is_empty() {
            return Err(Error::Config("no feature source enabled: turn on tfidf or a feature family".into()));
        }
        if self.fragment_len == 0 || self.vocabulary_size == 0 {
            return Err(Error::Config("fragment length and vocabulary size must be positive".into()));
        }
        if !(self.variance_target > 0.0 && self.variance_target <= 1.0) {
            return Err(Error::Config(format!(
                "variance target {} outside (0, 1]",
                self.variance_target
            )));
        }
        Ok(())
    }

    /// Families sorted into vector order without repeats.
    pub fn normalized_families(&self) -> Vec<Family> {
        let mut f = self.families.clone();
        f.sort();
        f.dedup();
        f
    }
}

/// Per-document inputs shared by every pipeline configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedDoc {
    /// Leading fragment of the preview.
    pub preview_lemmas: Vec<String>,
    /// The same fragment followed by the abstract.
    pub augmented_lemmas: Vec<String>,
    /// All 56 features.
    pub features: Vec<f64>,
    pub warnings: Vec<ExtractionWarning>,
}

impl PreparedDoc {
    /// `fragment_len` caps the preview part of both lemma sequences; the
    /// abstract is appended after the capped preview in full.
    pub fn prepare(doc: &Document, res: &Resources, fragment_len: usize) -> Result<Self> {
        let extraction = extract_all(doc, res)?;
        let morph = res.morphology.as_ref();
        let all_preview = preprocess(&doc.preview_text, morph, &res.stopwords);
        let preview_lemmas = fragment(&all_preview, fragment_len).to_vec();
        let augmented_lemmas = if doc.abstract_text.is_some() {
            let joined = preprocess(&augment_with_abstract(doc), morph, &res.stopwords);
            let split = all_preview.len().min(joined.len());
            let mut lemmas = preview_lemmas.clone();
            lemmas.extend_from_slice(&joined[split..]);
            lemmas
        } else {
            preview_lemmas.clone()
        };
        Ok(PreparedDoc {
            preview_lemmas,
            augmented_lemmas,
            features: extraction.features.values,
            warnings: extraction.warnings,
        })
    }

    fn lemmas(&self, config: &PipelineConfig) -> &[String] {
        if config.abstracts {
            &self.augmented_lemmas
        } else {
            fragment(&self.preview_lemmas, config.fragment_len)
        }
    }
}

/// Prepares documents in parallel, keeping input order. Failures name the document.
pub fn prepare_all(docs: &[&Document], res: &Resources, fragment_len: usize) -> Result<Vec<PreparedDoc>> {
    docs.par_iter()
        .map(|d| {
            PreparedDoc::prepare(d, res, fragment_len).map_err(|e| Error::Validation(format!("document `{}`: {e}", d.id)))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedPipeline {
    pub config: PipelineConfig,
    pub tfidf: Option<TfidfModel>,
    pub scaler: Option<Scaler>,
    pub svd: Option<SvdModel>,
}

impl FittedPipeline {
    /// Fits every stage on the training documents and returns their rows.
    pub fn fit(config: &PipelineConfig, train: &[&PreparedDoc]) -> Result<(Self, Vec<Vec<f64>>)> {
        config.validate()?;
        if train.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut config = config.clone();
        config.families = config.normalized_families();

        let tfidf = if config.tfidf {
            let fragments: Vec<&[String]> = train.iter().map(|d| d.lemmas(&config)).collect();
            Some(TfidfModel::fit(&fragments, config.vocabulary_size)?)
        } else {
            None
        };
        let scaler = if config.families.is_empty() {
            None
        } else {
            let raw: Vec<Vec<f64>> = train
                .iter()
                .map(|d| select_families(&d.features, &config.families))
                .collect();
            Some(Scaler::fit(&raw)?)
        };
        let mut fitted = FittedPipeline {
            config,
            tfidf,
            scaler,
            svd: None,
        };
        let rows: Vec<Vec<f64>> = train.iter().map(|d| fitted.combined(d)).collect::<Result<_>>()?;
        if fitted.config.svd {
            let svd = SvdModel::fit(&rows, fitted.config.variance_target)?;
            let projected = rows.iter().map(|r| svd.apply(r)).collect::<Result<_>>()?;
            fitted.svd = Some(svd);
            return Ok((fitted, projected));
        }
        Ok((fitted, rows))
    }

    fn combined(&self, doc: &PreparedDoc) -> Result<Vec<f64>> {
        let mut row = Vec::with_capacity(self.combined_dim());
        if let Some(t) = &self.tfidf {
            row.extend(t.transform(doc.lemmas(&self.config)).to_dense(t.dim()));
        }
        if let Some(s) = &self.scaler {
            row.extend(s.apply(&select_families(&doc.features, &self.config.families))?);
        }
        Ok(row)
    }

    pub fn transform(&self, doc: &PreparedDoc) -> Result<Vec<f64>> {
        let row = self.combined(doc)?;
        match &self.svd {
            Some(svd) => svd.apply(&row),
            None => Ok(row),
        }
    }

    /// Width before any SVD projection.
    pub fn combined_dim(&self) -> usize {
        self.tfidf.as_ref().map_or(0, |t| t.dim()) + self.scaler.as_ref().map_or(0, |s| s.dim())
    }

    pub fn output_dim(&self) -> usize {
        match &self.svd {
            Some(svd) => svd.k(),
            None => self.combined_dim(),
        }
    }

    /// Column names before any SVD projection.
    pub fn column_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .tfidf
            .iter()
            .flat_map(|t| t.vocabulary().iter().map(|w| format!("tfidf:{w}")))
            .collect();
        names.extend(family_names(&self.config.families).into_iter().map(String::from));
        names
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AgeRating, Label};

    fn doc(id: &str, text: &str, rating: AgeRating) -> Document {
        Document {
            id: id.into(),
            preview_text: text.into(),
            abstract_text: Some("Москва праздник.".into()),
            age_rating: rating,
            genre: None,
            label: Label::Children,
        }
    }

    fn prepared() -> Vec<PreparedDoc> {
        let res = Resources::sample();
        let docs = [
            doc("a", "Кот спит. Пёс бежит.", AgeRating::R0),
            doc("b", "Большой рыжий кот быстро бежал в город. Маша спит.", AgeRating::R6),
            doc("c", "Ужасный пёс не спал. Собака тихо спит дома!", AgeRating::R16),
        ];
        let refs: Vec<&Document> = docs.iter().collect();
        prepare_all(&refs, &res, FRAGMENT_LEN).unwrap()
    }

    #[test]
    fn requires_a_source() {
        let cfg = PipelineConfig {
            tfidf: false,
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn widths_follow_config() {
        let docs = prepared();
        let refs: Vec<&PreparedDoc> = docs.iter().collect();
        let cfg = PipelineConfig {
            families: vec![Family::Publishing, Family::Grammatical, Family::Publishing],
            ..Default::default()
        };
        let (p, rows) = FittedPipeline::fit(&cfg, &refs).unwrap();
        let vocab = p.tfidf.as_ref().unwrap().dim();
        assert_eq!(p.config.families, vec![Family::Grammatical, Family::Publishing]);
        assert_eq!(rows[0].len(), vocab + 8);
        assert_eq!(p.column_names().len(), vocab + 8);
        assert_eq!(p.transform(&docs[1]).unwrap(), rows[1]);

        let with_abstracts = PipelineConfig { abstracts: true, ..Default::default() };
        let (q, _) = FittedPipeline::fit(&with_abstracts, &refs).unwrap();
        assert!(q.tfidf.unwrap().vocabulary().contains(&"праздник".to_string()));
    }

    #[test]
    fn svd_projects_rows() {
        let docs = prepared();
        let refs: Vec<&PreparedDoc> = docs.iter().collect();
        let cfg = PipelineConfig {
            families: Family::ALL.to_vec(),
            svd: true,
            ..Default::default()
        };
        let (p, rows) = FittedPipeline::fit(&cfg, &refs).unwrap();
        assert!(p.output_dim() <= 2);
        assert_eq!(rows[0].len(), p.output_dim());
        let back: FittedPipeline = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back.transform(&docs[2]).unwrap(), p.transform(&docs[2]).unwrap());
    }
}
